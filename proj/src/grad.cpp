#include "dmu/grad.hpp"

#include <cmath>
#include <stdexcept>

namespace dmu {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

Gradients backward(const DmuParams& params, const ForwardTrace& trace,
                   double d_y_final) {
    if (!(params == trace.params))
        throw std::invalid_argument("trace was produced with different params");

    const GatePair g = trace.gate;
    const bool m_clamped = trace.clamps.m_log_clamp;
    const double pass_ylog = trace.clamps.y_log_clamp ? 0.0 : 1.0;
    const double pass_lin_floor = trace.clamps.lin_log_floor ? 0.0 : 1.0;

    // y = s_mix * exp(m_log); nothing flows through an active clamp (and the
    // clamped branch may hold inf, so it must not be multiplied by zero)
    const double d_s_mix = d_y_final * trace.m_final;
    const double d_m_log = d_y_final * trace.s_mix * trace.m_final;
    const double d_m_pre = m_clamped ? 0.0 : d_m_log;

    // d/dG of the two gate-weighted sums (G_log = 1 - G_lin)
    const double d_gate_value =
        d_s_mix * (trace.s_lin - trace.s_log) +
        (m_clamped ? 0.0 : d_m_pre * (trace.y_lin_log - trace.y_log_clamped));

    Gradients out;
    const double sigma_slope = g.lin * g.log / params.gate_temperature;
    if (params.gate_mode == GateMode::SingleRaw) {
        out.d_gate_raw = d_gate_value * sigma_slope;
    } else {
        out.d_gate_logits[0] = d_gate_value * sigma_slope;
        out.d_gate_logits[1] = -d_gate_value * sigma_slope;
    }

    if (!params.operand_frozen) {
        // adjoints of the two domain results
        const double dtanh = (1.0 - trace.s_lin * trace.s_lin) / params.sign_temperature;
        const double d_y_lin_from_sign = d_s_mix * g.lin * dtanh;
        // y_lin_log = log(clamp(sqrt(y_lin^2 + eps), mag_min))
        const double d_y_lin_from_mag =
            d_m_pre * g.lin * pass_lin_floor *
            (trace.y_lin / (trace.y_lin * trace.y_lin + params.smooth_abs_eps));
        const double d_y_lin = d_y_lin_from_sign + d_y_lin_from_mag;
        const double d_y_log = d_m_pre * g.log * pass_ylog;

        // the sign count m treats the nonzero-selector mask as constant
        out.d_operand_selector.resize(params.width());
        for (std::size_t i = 0; i < params.width(); ++i) {
            out.d_operand_selector[i] =
                d_y_lin * trace.x[i] + d_y_log * trace.x_log_mag[i];
        }
    }
    return out;
}

double squared_error(const DmuParams& params, std::span<const double> x,
                     double target) {
    const double y = forward_value(params, x);
    const double e = y - target;
    return e * e;
}

Gradients fd_gradient(const DmuParams& params, std::span<const double> x,
                      double target, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd step h must be positive");

    auto loss_at = [&](const DmuParams& p) { return squared_error(p, x, target); };
    auto central = [&](auto&& nudge) {
        DmuParams hi = params, lo = params;
        nudge(hi, +h);
        nudge(lo, -h);
        return (loss_at(hi) - loss_at(lo)) / (2.0 * h);
    };

    Gradients out;
    if (params.gate_mode == GateMode::SingleRaw) {
        out.d_gate_raw = central([](DmuParams& p, double d) { p.gate_raw += d; });
    } else {
        out.d_gate_logits[0] =
            central([](DmuParams& p, double d) { p.gate_logits[0] += d; });
        out.d_gate_logits[1] =
            central([](DmuParams& p, double d) { p.gate_logits[1] += d; });
    }
    if (!params.operand_frozen) {
        out.d_operand_selector.resize(params.width());
        for (std::size_t i = 0; i < params.width(); ++i) {
            out.d_operand_selector[i] = central(
                [i](DmuParams& p, double d) { p.operand_selector[i] += d; });
        }
    }
    return out;
}

}  // namespace dmu
