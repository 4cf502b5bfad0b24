#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dmu/params.hpp"

// Forward pass of the unit.
//
// The input is split into magnitudes and signs. Magnitudes feed two domain
// computations selected by O: a linear result (on the signed inputs) and a
// log-space result (on log magnitudes). Each domain carries its own sign --
// a temperature tanh of the linear result, and a cosine of the count of
// selected negative inputs. A gate blends signs directly and magnitudes in
// log space, and the blended magnitude is exponentiated back.
//
// Every clamp site records whether it fired so the gradient engine can apply
// the hard-clamp (zero) subgradient.

namespace dmu {

struct ForwardTrace {
    DmuParams params;  // snapshot; backward() validates against it

    std::vector<double> x;          // signed inputs
    std::vector<double> x_mag;      // |x|
    std::vector<double> x_sign;     // sign(x), sign(0) := +1
    std::vector<double> x_log_mag;  // log(clamp(|x|, mag_min))

    GatePair gate;

    double y_lin = 0.0;
    double y_log = 0.0;
    double sign_count = 0.0;  // m = sum of (1 - sign_i)/2 over selected inputs
    double s_lin = 0.0;
    double s_log = 0.0;
    double s_mix = 0.0;

    double smooth_abs_value = 0.0;  // sqrt(y_lin^2 + smooth_abs_eps)
    double y_lin_log = 0.0;         // log(clamp(smooth_abs_value, mag_min))
    double y_log_clamped = 0.0;     // clamp(y_log, -L, L)
    double m_log_pre = 0.0;         // gate-weighted sum before the final clamp
    double m_log = 0.0;             // clamp(m_log_pre, -L, L)
    double m_final = 0.0;           // exp(m_log)
    double y_final = 0.0;           // s_mix * m_final

    struct ClampFlags {
        std::uint32_t mag_floor = 0;  // bit i set when |x_i| < mag_min
        bool lin_log_floor = false;   // smooth_abs_value < mag_min
        bool y_log_clamp = false;     // |y_log| > L
        bool m_log_clamp = false;     // |m_log_pre| > L
    } clamps;
};

// Throws std::invalid_argument when any component is non-finite.
std::pair<std::vector<double>, std::vector<double>> decompose(
    std::span<const double> x);

// Linear result on signed inputs, log result on floored log magnitudes.
std::pair<double, double> domain_results(const DmuParams& params,
                                         std::span<const double> x,
                                         std::span<const double> magnitudes);

inline double sign_linear(double y_lin, double sign_temperature) {
    return std::tanh(y_lin / sign_temperature);
}

// m counts selected negative inputs (selector entry nonzero); the cosine maps
// even counts to +1 and odd counts to -1.
double sign_log(std::span<const double> signs, std::span<const double> selector);

struct MixResult {
    double s_mix;
    double smooth_abs_value;
    double y_lin_log;
    double y_log_clamped;
    double m_log_pre;
    double m_log;
    double m_final;
    double y_final;
    bool lin_log_floor;
    bool y_log_clamp;
    bool m_log_clamp;
};

MixResult mix_and_finalize(const DmuParams& params, double y_lin, double y_log,
                           double s_lin, double s_log);

// Full composition; the trace holds every intermediate.
std::pair<double, ForwardTrace> forward(const DmuParams& params,
                                        std::span<const double> x);

// Same pipeline without building a trace.
double forward_value(const DmuParams& params, std::span<const double> x);

}  // namespace dmu
