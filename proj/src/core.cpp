#include "dmu/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dmu {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

[[noreturn]] void reject_nonfinite(std::size_t i, double v) {
    throw std::invalid_argument("non-finite input at index " + std::to_string(i) +
                                ": " + std::to_string(v));
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> decompose(
    std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("input width must be >= 1");
    std::vector<double> mags(x.size()), signs(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) reject_nonfinite(i, x[i]);
        mags[i] = std::fabs(x[i]);
        signs[i] = x[i] < 0.0 ? -1.0 : 1.0;
    }
    return {std::move(mags), std::move(signs)};
}

std::pair<double, double> domain_results(const DmuParams& params,
                                         std::span<const double> x,
                                         std::span<const double> magnitudes) {
    if (x.size() != params.width())
        throw std::invalid_argument("input width does not match operand selector");
    double y_lin = 0.0;
    double y_log = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y_lin += params.operand_selector[i] * x[i];
        y_log += params.operand_selector[i] *
                 std::log(std::max(magnitudes[i], params.mag_min));
    }
    return {y_lin, y_log};
}

double sign_log(std::span<const double> signs, std::span<const double> selector) {
    double m = 0.0;
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (selector[i] != 0.0) m += 0.5 * (1.0 - signs[i]);
    }
    return std::cos(kPi * m);
}

MixResult mix_and_finalize(const DmuParams& params, double y_lin, double y_log,
                           double s_lin, double s_log) {
    const GatePair g = params.gate();
    const double L = params.log_lim;

    MixResult r;
    r.s_mix = g.lin * s_lin + g.log * s_log;
    r.smooth_abs_value = std::sqrt(y_lin * y_lin + params.smooth_abs_eps);
    r.lin_log_floor = r.smooth_abs_value < params.mag_min;
    r.y_lin_log = std::log(std::max(r.smooth_abs_value, params.mag_min));
    r.y_log_clamp = y_log < -L || y_log > L;
    r.y_log_clamped = std::min(std::max(y_log, -L), L);
    r.m_log_pre = g.lin * r.y_lin_log + g.log * r.y_log_clamped;
    r.m_log_clamp = r.m_log_pre < -L || r.m_log_pre > L;
    r.m_log = std::min(std::max(r.m_log_pre, -L), L);
    r.m_final = std::exp(r.m_log);
    r.y_final = r.s_mix * r.m_final;
    return r;
}

std::pair<double, ForwardTrace> forward(const DmuParams& params,
                                        std::span<const double> x) {
    params.validate();
    ForwardTrace t;
    t.params = params;
    t.x.assign(x.begin(), x.end());

    auto [mags, signs] = decompose(x);
    t.x_mag = std::move(mags);
    t.x_sign = std::move(signs);

    t.x_log_mag.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (t.x_mag[i] < params.mag_min) t.clamps.mag_floor |= (1u << i);
        t.x_log_mag[i] = std::log(std::max(t.x_mag[i], params.mag_min));
    }

    auto [y_lin, y_log] = domain_results(params, x, t.x_mag);
    t.y_lin = y_lin;
    t.y_log = y_log;

    t.gate = params.gate();
    t.s_lin = sign_linear(y_lin, params.sign_temperature);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (params.operand_selector[i] != 0.0) m += 0.5 * (1.0 - t.x_sign[i]);
    }
    t.sign_count = m;
    t.s_log = std::cos(kPi * m);

    MixResult r = mix_and_finalize(params, y_lin, y_log, t.s_lin, t.s_log);
    t.s_mix = r.s_mix;
    t.smooth_abs_value = r.smooth_abs_value;
    t.y_lin_log = r.y_lin_log;
    t.y_log_clamped = r.y_log_clamped;
    t.m_log_pre = r.m_log_pre;
    t.m_log = r.m_log;
    t.m_final = r.m_final;
    t.y_final = r.y_final;
    t.clamps.lin_log_floor = r.lin_log_floor;
    t.clamps.y_log_clamp = r.y_log_clamp;
    t.clamps.m_log_clamp = r.m_log_clamp;

    return {t.y_final, std::move(t)};
}

double forward_value(const DmuParams& params, std::span<const double> x) {
    auto [mags, signs] = decompose(x);
    auto [y_lin, y_log] = domain_results(params, x, mags);
    const double s_lin = sign_linear(y_lin, params.sign_temperature);
    const double s_log = sign_log(signs, params.operand_selector);
    return mix_and_finalize(params, y_lin, y_log, s_lin, s_log).y_final;
}

}  // namespace dmu
