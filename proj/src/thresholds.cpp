#include "dmu/thresholds.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "dmu/accum.hpp"
#include "dmu/io.hpp"
#include "dmu/threadpool.hpp"

namespace dmu {

DmuParams optimal_params(Op op) {
    DmuParams p = (op == Op::Add || op == Op::Mul) ? DmuParams::nalm_add()
                                                   : DmuParams::nalm_sub();
    const bool linear_domain = (op == Op::Add || op == Op::Sub);
    p.set_gate_value(linear_domain ? 1.0 - kSaturatedGateValue : kSaturatedGateValue);
    return p;
}

namespace {

DmuParams perturbed(const DmuParams& base, double eps, double gate_slope,
                    bool perturb_operands) {
    DmuParams p = base;
    const double g = base.gate().lin;
    p.set_gate_value(std::min(1.0, std::max(0.0, g + eps * gate_slope)));
    if (perturb_operands) {
        p.operand_frozen = false;  // perturbed entries leave the canonical set
        for (auto& o : p.operand_selector) o += eps;
    }
    return p;
}

}  // namespace

ThresholdRecord compute_threshold(Op op, const RangeSpec& range,
                                  const ThresholdConfig& cfg) {
    if (cfg.epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
    if (cfg.n < 1) throw std::invalid_argument("sample count must be >= 1");

    DmuParams opt = optimal_params(op);
    opt.sign_temperature = cfg.sign_temperature;
    const ResolvedUnit unit_up = ResolvedUnit::from(
        perturbed(opt, cfg.epsilon, cfg.gate_slope, cfg.perturb_operands));
    const ResolvedUnit unit_dn = ResolvedUnit::from(
        perturbed(opt, -cfg.epsilon, cfg.gate_slope, cfg.perturb_operands));

    const KernelOps& ops = kernel_ops(cfg.kernel);
    const std::uint64_t stream = threshold_stream_seed(cfg.seed, op, range);

    // one pass over the stream, both perturbation directions; keep the worse
    KahanSum up, dn;
    stream_extrapolation(op, range, stream, cfg.n, [&](const Batch& chunk) {
        up.add(ops.sq_err_sum(unit_up, chunk.x0.data(), chunk.x1.data(),
                              chunk.targets.data(), chunk.size()));
        dn.add(ops.sq_err_sum(unit_dn, chunk.x0.data(), chunk.x1.data(),
                              chunk.targets.data(), chunk.size()));
    });

    ThresholdRecord rec;
    rec.op = op;
    rec.range = range.name;
    rec.epsilon = cfg.epsilon;
    rec.n = cfg.n;
    rec.threshold = std::max(up.value(), dn.value()) / static_cast<double>(cfg.n);
    rec.seed_hint = cfg.seed;
    return rec;
}

std::vector<ThresholdRecord> threshold_table(const std::vector<Op>& ops,
                                             const std::vector<RangeSpec>& ranges,
                                             const ThresholdConfig& cfg, int jobs) {
    std::vector<ThresholdRecord> out(ops.size() * ranges.size());
    parallel_for(out.size(), jobs, [&](std::size_t i) {
        const Op op = ops[i / ranges.size()];
        const RangeSpec& range = ranges[i % ranges.size()];
        out[i] = compute_threshold(op, range, cfg);
    });
    return out;
}

std::string threshold_csv(const std::vector<ThresholdRecord>& records) {
    std::ostringstream ss;
    ss << "op,range,epsilon,n,threshold\n";
    for (const auto& r : records) {
        ss << op_name(r.op) << ',' << r.range << ',' << format_double(r.epsilon)
           << ',' << r.n << ',' << format_double(r.threshold) << '\n';
    }
    return ss.str();
}

std::vector<ThresholdRecord> parse_threshold_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "op,range,epsilon,n,threshold")
        throw std::runtime_error("threshold CSV: bad or missing header");
    std::vector<ThresholdRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 5)
            throw std::runtime_error("threshold CSV: expected 5 fields: " + line);
        ThresholdRecord r;
        r.op = parse_op(f[0]);
        r.range = f[1];
        r.epsilon = parse_double(f[2]);
        r.n = std::stol(f[3]);
        r.threshold = parse_double(f[4]);
        out.push_back(std::move(r));
    }
    return out;
}

const ThresholdRecord& find_threshold(const std::vector<ThresholdRecord>& records,
                                      Op op, const std::string& range) {
    for (const auto& r : records)
        if (r.op == op && r.range == range) return r;
    throw std::runtime_error(std::string("no threshold for ") + op_name(op) + "/" +
                             range);
}

}  // namespace dmu
