#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

// DAG extension: N stacked mixing steps over a growing working state of
// (magnitude, sign) slots. Slot k of step n is num_initial + n; the causal
// mask keeps selector rows zero at slots that do not exist yet. Gates are
// stored as mixing values in [0, 1] (1 = linear domain, 0 = log domain).

namespace dmu {

struct DagUnitConfig {
    double sign_temperature = 0.001;
    double mag_min = 1e-12;
    double smooth_abs_eps = 1e-8;
    double log_lim = 30.0;

    bool operator==(const DagUnitConfig&) const = default;
};

struct DagStep {
    std::vector<double> selector;  // length M
    double gate = 1.0;             // G_lin value

    bool operator==(const DagStep&) const = default;
};

struct DagProgram {
    int num_initial = 0;
    std::vector<DagStep> steps;
    int select_index = -1;  // -1 selects the last slot
    DagUnitConfig unit;

    bool operator==(const DagProgram&) const = default;

    int depth() const { return static_cast<int>(steps.size()); }
    int width() const { return num_initial + depth(); }
    int selection() const { return select_index < 0 ? width() - 1 : select_index; }

    // Throws std::invalid_argument on mask violations, bad sizes or gates
    // outside [0, 1].
    void validate() const;
};

struct DagStepTrace {
    double y_lin = 0, y_log = 0, sign_count = 0;
    double s_lin = 0, s_log = 0, s_mix = 0;
    double smooth_abs = 0, y_lin_log = 0, y_log_clamped = 0;
    double m_log_pre = 0, m_log = 0, mag_out = 0;
    bool lin_log_floor = false, y_log_clamp = false, m_log_clamp = false;
};

struct DagTrace {
    DagProgram program;
    std::vector<double> work_mag;   // final working state (slots never mutate)
    std::vector<double> work_sign;
    std::vector<DagStepTrace> steps;
    double output = 0.0;
};

double dag_execute(const DagProgram& program, std::span<const double> initial);

std::pair<double, DagTrace> dag_execute_traced(const DagProgram& program,
                                               std::span<const double> initial);

struct DagGradients {
    std::vector<double> d_gate;                    // per step
    std::vector<std::vector<double>> d_selector;   // per step, length M
};

// Reverse sweep through the trace. Selector gradients treat the
// nonzero-selector sign mask as constant, matching the core convention.
DagGradients dag_backward(const DagTrace& trace, double d_output);

// Text form: "inputs N" / "steps N" header, one "i: [s0,s1,...] gate" line per
// step, optional "select K" and "unit T mag_min eps L" lines. Floats
// round-trip bit-exactly.
std::string dag_serialize(const DagProgram& program);
DagProgram dag_parse(const std::string& text);

}  // namespace dmu
