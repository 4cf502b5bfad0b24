#include "dmu/tasks.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dmu {

const char* op_name(Op op) {
    switch (op) {
        case Op::Add: return "add";
        case Op::Sub: return "sub";
        case Op::Mul: return "mul";
        case Op::Div: return "div";
    }
    return "?";
}

Op parse_op(const std::string& name) {
    if (name == "add") return Op::Add;
    if (name == "sub") return Op::Sub;
    if (name == "mul") return Op::Mul;
    if (name == "div") return Op::Div;
    throw std::invalid_argument("unknown op '" + name + "' (valid: add sub mul div)");
}

double apply_op(Op op, double a, double b) {
    switch (op) {
        case Op::Add: return a + b;
        case Op::Sub: return a - b;
        case Op::Mul: return a * b;
        case Op::Div: return a / b;
    }
    return 0.0;
}

const std::vector<RangeSpec>& builtin_ranges() {
    static const std::vector<RangeSpec> ranges = {
        {"sym", -2.0, 2.0, -6.0, 6.0},
        {"neg", -2.0, -1.0, -6.0, -2.0},
        {"pos", 1.0, 2.0, 2.0, 6.0},
        {"p01", 0.1, 0.2, 0.2, 2.0},
        {"n01", -0.2, -0.1, -2.0, -0.2},
        {"p11", 1.1, 1.2, 1.2, 6.0},
        {"n10", -1.2, -1.1, -6.0, -1.2},
        {"p20", 10.0, 20.0, 20.0, 40.0},
        {"n20", -20.0, -10.0, -40.0, -20.0},
    };
    return ranges;
}

const RangeSpec& find_range(const std::string& name,
                            const std::vector<RangeSpec>& ranges) {
    for (const auto& r : ranges)
        if (r.name == name) return r;
    std::string valid;
    for (const auto& r : ranges) {
        if (!valid.empty()) valid += ' ';
        valid += r.name;
    }
    throw std::invalid_argument("unknown range '" + name + "' (valid: " + valid + ")");
}

const RangeSpec& find_range(const std::string& name) {
    return find_range(name, builtin_ranges());
}

std::vector<RangeSpec> load_ranges_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ranges file: " + path);
    std::vector<RangeSpec> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        RangeSpec r;
        if (!(ss >> r.name)) continue;  // blank line
        if (!(ss >> r.lo >> r.hi >> r.extra_lo >> r.extra_hi))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected 'name lo hi extra_lo extra_hi'");
        if (!(r.lo < r.hi) || !(r.extra_lo < r.extra_hi))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": interval bounds must satisfy lo < hi");
        out.push_back(std::move(r));
    }
    if (out.empty()) throw std::runtime_error(path + ": no ranges defined");
    return out;
}

namespace {

void fill_uniform(Xoshiro256pp& rng, Op op, double lo, double hi, Batch& batch,
                  std::size_t n) {
    batch.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a = rng.uniform(lo, hi);
        double b = rng.uniform(lo, hi);
        if (op == Op::Div) {
            while (std::fabs(b) < kDivGuard) {
                a = rng.uniform(lo, hi);
                b = rng.uniform(lo, hi);
            }
        }
        batch.x0[i] = a;
        batch.x1[i] = b;
        batch.targets[i] = apply_op(op, a, b);
    }
}

}  // namespace

Batch sample_batch(const TaskSpec& task, long step) {
    Xoshiro256pp rng(derive_stream(task.seed, StreamKind::TrainBatch,
                                   static_cast<std::uint64_t>(step)));
    Batch batch;
    fill_uniform(rng, task.op, task.range.lo, task.range.hi, batch,
                 static_cast<std::size_t>(task.batch_size));
    return batch;
}

Batch extrapolation_batch(const TaskSpec& task, long count) {
    if (count < 1) throw std::invalid_argument("extrapolation count must be >= 1");
    Xoshiro256pp rng(derive_stream(task.seed, StreamKind::EvalSet));
    Batch batch;
    fill_uniform(rng, task.op, task.range.extra_lo, task.range.extra_hi, batch,
                 static_cast<std::size_t>(count));
    return batch;
}

void stream_extrapolation(Op op, const RangeSpec& range, std::uint64_t stream_seed,
                          long count,
                          const std::function<void(const Batch&)>& consume) {
    Xoshiro256pp rng(stream_seed);
    Batch chunk;
    long remaining = count;
    while (remaining > 0) {
        const long n = remaining < kStreamChunk ? remaining : kStreamChunk;
        fill_uniform(rng, op, range.extra_lo, range.extra_hi, chunk,
                     static_cast<std::size_t>(n));
        consume(chunk);
        remaining -= n;
    }
}

}  // namespace dmu
