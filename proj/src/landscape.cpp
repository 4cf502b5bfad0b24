#include "dmu/landscape.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dmu/eval.hpp"
#include "dmu/io.hpp"
#include "dmu/threadpool.hpp"

namespace dmu {

const char* axis_name(AxisId id) {
    switch (id) {
        case AxisId::GateRaw: return "gate_raw";
        case AxisId::GateValue: return "gate_value";
        case AxisId::O0: return "o0";
        case AxisId::O1: return "o1";
    }
    return "?";
}

AxisId parse_axis(const std::string& name) {
    if (name == "gate_raw") return AxisId::GateRaw;
    if (name == "gate_value") return AxisId::GateValue;
    if (name == "o0") return AxisId::O0;
    if (name == "o1") return AxisId::O1;
    throw std::invalid_argument("unknown axis '" + name +
                                "' (valid: gate_raw gate_value o0 o1)");
}

namespace {

std::vector<double> grid_values(const GridSpec& g) {
    if (g.steps < 2) throw std::invalid_argument("grid needs at least 2 steps");
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi) || !(g.lo < g.hi))
        throw std::invalid_argument("grid bounds must be finite with lo < hi");
    std::vector<double> v(g.steps);
    const double span = g.hi - g.lo;
    for (int i = 0; i < g.steps; ++i)
        v[i] = g.lo + span * static_cast<double>(i) / (g.steps - 1);
    return v;
}

void apply_axis(DmuParams& p, AxisId id, double v) {
    switch (id) {
        case AxisId::GateRaw: p.gate_raw = v; break;
        case AxisId::GateValue: p.set_gate_value(v); break;
        case AxisId::O0:
            p.operand_frozen = false;
            p.operand_selector[0] = v;
            break;
        case AxisId::O1:
            p.operand_frozen = false;
            p.operand_selector[1] = v;
            break;
    }
}

}  // namespace

ScanResult scan(const ScanSpec& spec, int jobs) {
    ScanResult res;
    res.spec = spec;
    res.axis1_values = grid_values(spec.grid1);
    if (spec.axis2) res.axis2_values = grid_values(spec.grid2);

    TaskSpec task;
    task.op = spec.op;
    task.range = spec.range;
    task.seed = spec.batch_seed;
    task.batch_size = spec.batch_size;
    const Batch batch = sample_batch(task, 0);  // same batch at every grid point

    const KernelOps& ops = kernel_ops(spec.kernel);
    const std::size_t n2 = spec.axis2 ? res.axis2_values.size() : 1;
    res.loss.resize(res.axis1_values.size() * n2);

    parallel_for(res.loss.size(), jobs, [&](std::size_t idx) {
        DmuParams p = spec.base;
        apply_axis(p, spec.axis1, res.axis1_values[idx / n2]);
        if (spec.axis2) apply_axis(p, *spec.axis2, res.axis2_values[idx % n2]);
        res.loss[idx] = batch_mse(ops, ResolvedUnit::from(p), batch);
    });
    return res;
}

Unimodality unimodality_check(std::span<const double> losses,
                              std::span<const double> axis_values) {
    if (losses.empty()) throw std::invalid_argument("empty scan");
    std::size_t best = 0;
    for (std::size_t i = 1; i < losses.size(); ++i)
        if (losses[i] < losses[best]) best = i;

    double lo = losses[best], hi = losses[best];
    for (const double v : losses) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double tol = 1e-12 * (hi - lo);

    Unimodality u;
    u.min_index = best;
    u.min_loss = losses[best];
    u.min_value = axis_values.empty() ? 0.0 : axis_values[best];
    u.unimodal = true;
    for (std::size_t i = 0; i < best; ++i)
        if (losses[i + 1] > losses[i] + tol) u.unimodal = false;
    for (std::size_t i = best; i + 1 < losses.size(); ++i)
        if (losses[i + 1] < losses[i] - tol) u.unimodal = false;
    return u;
}

std::string scan_csv(const ScanResult& result) {
    std::ostringstream ss;
    if (result.spec.axis2) {
        ss << axis_name(result.spec.axis1) << ',' << axis_name(*result.spec.axis2)
           << ",loss\n";
        const std::size_t n2 = result.axis2_values.size();
        for (std::size_t i = 0; i < result.axis1_values.size(); ++i)
            for (std::size_t j = 0; j < n2; ++j)
                ss << format_double(result.axis1_values[i]) << ','
                   << format_double(result.axis2_values[j]) << ','
                   << format_double(result.loss[i * n2 + j]) << '\n';
    } else {
        ss << axis_name(result.spec.axis1) << ",loss\n";
        for (std::size_t i = 0; i < result.axis1_values.size(); ++i)
            ss << format_double(result.axis1_values[i]) << ','
               << format_double(result.loss[i]) << '\n';
    }
    return ss.str();
}

namespace {

std::string json_str(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string scan_metadata_json(const ScanResult& result) {
    const ScanSpec& s = result.spec;
    std::ostringstream ss;
    ss << "{\n";
    ss << "  \"op\": " << json_str(op_name(s.op)) << ",\n";
    ss << "  \"range\": {\"name\": " << json_str(s.range.name)
       << ", \"lo\": " << format_double(s.range.lo)
       << ", \"hi\": " << format_double(s.range.hi) << "},\n";
    ss << "  \"axis1\": {\"id\": " << json_str(axis_name(s.axis1))
       << ", \"lo\": " << format_double(s.grid1.lo)
       << ", \"hi\": " << format_double(s.grid1.hi) << ", \"steps\": " << s.grid1.steps
       << "},\n";
    if (s.axis2) {
        ss << "  \"axis2\": {\"id\": " << json_str(axis_name(*s.axis2))
           << ", \"lo\": " << format_double(s.grid2.lo)
           << ", \"hi\": " << format_double(s.grid2.hi)
           << ", \"steps\": " << s.grid2.steps << "},\n";
    }
    ss << "  \"batch_seed\": " << s.batch_seed << ",\n";
    ss << "  \"batch_size\": " << s.batch_size << ",\n";
    ss << "  \"note\": " << json_str(s.note) << "\n";
    ss << "}\n";
    return ss.str();
}

}  // namespace dmu
