#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dmu/prng.hpp"

// Single-operation two-input regression tasks: sample x from a named training
// range, apply one of {+, -, *, /}. Extrapolation draws from the paired
// disjoint interval. Everything is a pure function of (seed, step).

namespace dmu {

enum class Op { Add, Sub, Mul, Div };

inline constexpr Op kAllOps[] = {Op::Add, Op::Sub, Op::Mul, Op::Div};

const char* op_name(Op op);
Op parse_op(const std::string& name);  // throws with the valid names listed
double apply_op(Op op, double a, double b);

struct RangeSpec {
    std::string name;
    double lo = 0.0, hi = 0.0;              // training interval [lo, hi)
    double extra_lo = 0.0, extra_hi = 0.0;  // extrapolation interval

    bool operator==(const RangeSpec&) const = default;
};

// The nine benchmark ranges with their extrapolation pairs.
const std::vector<RangeSpec>& builtin_ranges();

const RangeSpec& find_range(const std::string& name);
const RangeSpec& find_range(const std::string& name,
                            const std::vector<RangeSpec>& ranges);

// Plain-text table: one "name lo hi extra_lo extra_hi" per line, '#' comments.
std::vector<RangeSpec> load_ranges_file(const std::string& path);

struct TaskSpec {
    Op op = Op::Add;
    RangeSpec range;
    std::uint64_t seed = 0;
    int batch_size = 128;
};

struct Batch {
    std::vector<double> x0, x1, targets;

    std::size_t size() const { return targets.size(); }
    void resize(std::size_t n) {
        x0.resize(n);
        x1.resize(n);
        targets.resize(n);
    }
};

// Divisors closer to zero than this are resampled. Only reachable when the
// sampling interval crosses zero (the sym range), where it bounds the
// quotient tail; the published threshold magnitudes imply a floor of this
// order in the benchmark data.
inline constexpr double kDivGuard = 0.02;

// Training batch for one step; pure function of (task.seed, step).
Batch sample_batch(const TaskSpec& task, long step);

// count examples from the extrapolation interval, seeded by task.seed.
Batch extrapolation_batch(const TaskSpec& task, long count);

// Streaming variant with an explicit stream seed so threshold evaluation and
// training-time confirmation can share exactly the same sample sequence.
void stream_extrapolation(Op op, const RangeSpec& range, std::uint64_t stream_seed,
                          long count,
                          const std::function<void(const Batch&)>& consume);

inline constexpr long kStreamChunk = 4096;

}  // namespace dmu
