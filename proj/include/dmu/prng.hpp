#pragma once

#include <cstdint>
#include <limits>

// Deterministic PRNG stack: splitmix64 for seeding / stream derivation,
// xoshiro256++ for bulk generation. Doubles use the 53-bit mantissa method.
// Determinism is promised within this implementation, not across libraries.

namespace dmu {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1), full 53-bit resolution
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi); rounding at the top end is clipped back below hi
    double uniform(double lo, double hi) {
        double v = lo + uniform01() * (hi - lo);
        if (v >= hi) v = hi - (hi - lo) * 0x1.0p-53;
        return v;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

// Purpose tags keep independent random streams from colliding when they are
// all derived from one experiment seed.
enum class StreamKind : std::uint64_t {
    TrainBatch = 1,
    EvalSet = 2,
    Threshold = 3,
    LandscapeBatch = 4,
    ExprTrial = 5,
};

// Stable mix of (seed, kind, a, b) into a fresh generator seed. Used for
// per-step batch streams (a = step) and per-cell threshold streams
// (a = op index, b = range hash).
inline std::uint64_t derive_stream(std::uint64_t seed, StreamKind kind,
                                   std::uint64_t a = 0, std::uint64_t b = 0) {
    SplitMix64 sm(seed);
    std::uint64_t h = sm.next();
    h ^= SplitMix64(static_cast<std::uint64_t>(kind) * 0x9e3779b97f4a7c15ull).next();
    h ^= SplitMix64(a + 0x632be59bd9b4e019ull).next();
    h ^= SplitMix64(b + 0xd1b54a32d192ed03ull).next();
    return h;
}

inline std::uint64_t fnv1a(const char* s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (; *s; ++s) {
        h ^= static_cast<unsigned char>(*s);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace dmu
