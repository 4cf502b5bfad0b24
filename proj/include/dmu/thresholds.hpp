#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmu/eval.hpp"
#include "dmu/params.hpp"
#include "dmu/tasks.hpp"

// Convergence thresholds by the weight-perturbation method: take the optimal
// unit for an operation, nudge its learnable gate by epsilon in value space
// (the loss-increasing direction), and measure extrapolation MSE over n
// streamed examples. A trained run counts as converged once it beats this
// number on the same sample stream.

namespace dmu {

struct ThresholdRecord {
    Op op = Op::Add;
    std::string range;
    double epsilon = 0.0;
    long n = 0;  // sample count
    double threshold = 0.0;
    // Seed of the sample stream the threshold was measured on. Not part of
    // the CSV; consumers loading a CSV must set it to the generation seed for
    // confirmation runs to replay the identical stream.
    std::uint64_t seed_hint = 1234;
};

// Canonical optimal configuration: [1,1] with a linear gate for add, log for
// mul; [1,-1] with a linear gate for sub, log for div. The gate raw value is
// finite, with logistic output within 1e-12 of the pure domain.
DmuParams optimal_params(Op op);

inline constexpr double kSaturatedGateValue = 1e-13;  // distance from 0/1

struct ThresholdConfig {
    double epsilon = 1e-5;
    long n = 1'000'000;
    std::uint64_t seed = 1234;
    bool perturb_operands = false;  // also nudge the frozen selector entries
    // The gate value moves by epsilon * gate_slope. 1.0 perturbs the mixing
    // value directly; 10.0 (one over the published gate temperature) matches
    // a raw-weight perturbation passed through the temperature scaling and
    // reproduces the published threshold magnitudes.
    double gate_slope = 1.0;
    double sign_temperature = DmuParams{}.sign_temperature;
    KernelKind kernel = KernelKind::Auto;
};

ThresholdRecord compute_threshold(Op op, const RangeSpec& range,
                                  const ThresholdConfig& cfg);

// Full ops x ranges grid, embarrassingly parallel.
std::vector<ThresholdRecord> threshold_table(const std::vector<Op>& ops,
                                             const std::vector<RangeSpec>& ranges,
                                             const ThresholdConfig& cfg, int jobs);

std::string threshold_csv(const std::vector<ThresholdRecord>& records);
std::vector<ThresholdRecord> parse_threshold_csv(const std::string& text);

// Lookup helper; throws if the (op, range) cell is missing.
const ThresholdRecord& find_threshold(const std::vector<ThresholdRecord>& records,
                                      Op op, const std::string& range);

}  // namespace dmu
