#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dmu/kernels.hpp"
#include "dmu/params.hpp"
#include "dmu/tasks.hpp"

// Loss-surface scans over one or two parameters. The loss at every grid point
// is the MSE over one fixed batch drawn from the training interval, so the
// surface is a deterministic function of the spec.

namespace dmu {

enum class AxisId { GateRaw, GateValue, O0, O1 };

const char* axis_name(AxisId id);
AxisId parse_axis(const std::string& name);  // gate_raw|gate_value|o0|o1

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int steps = 51;  // inclusive endpoints
};

struct ScanSpec {
    Op op = Op::Add;
    RangeSpec range;
    AxisId axis1 = AxisId::GateValue;
    GridSpec grid1;
    std::optional<AxisId> axis2;
    GridSpec grid2;
    DmuParams base = DmuParams::nalm_add();  // fixed values for unscanned params
    std::uint64_t batch_seed = 7;
    int batch_size = 2048;
    KernelKind kernel = KernelKind::Auto;
    std::string note;  // copied into the metadata JSON
};

struct ScanResult {
    ScanSpec spec;
    std::vector<double> axis1_values;
    std::vector<double> axis2_values;  // empty for 1-D scans
    // 1-D: loss[i]; 2-D: loss[i * axis2_values.size() + j] (axis1 major)
    std::vector<double> loss;
};

ScanResult scan(const ScanSpec& spec, int jobs);

struct Unimodality {
    bool unimodal = false;
    std::size_t min_index = 0;
    double min_value = 0.0;
    double min_loss = 0.0;
};

// Weak discrete unimodality: losses never rise before the global minimum and
// never fall after it (up to a relative tolerance on ties).
Unimodality unimodality_check(std::span<const double> losses,
                              std::span<const double> axis_values);

// x,loss rows for 1-D scans; x,y,loss rows for 2-D.
std::string scan_csv(const ScanResult& result);

std::string scan_metadata_json(const ScanResult& result);

}  // namespace dmu
