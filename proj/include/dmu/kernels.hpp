#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "dmu/params.hpp"

// Fixed-parameter batch evaluation of two-input units. This is the inner loop
// of threshold sweeps, training-time evaluation and landscape scans, so it has
// a scalar reference kernel and an AVX2 kernel selected at runtime. The scalar
// kernel reproduces forward() bit for bit; the AVX2 kernel uses its own vector
// exp/log/tanh and is equivalence-tested against the scalar one.

namespace dmu {

enum class KernelKind { Auto, Scalar, Avx2 };

// Width-2 parameters flattened for the hot loop.
struct ResolvedUnit {
    double o0, o1;
    double g_lin, g_log;
    double sign_temp;
    double mag_min;
    double smooth_abs_eps;
    double log_lim;
    bool sel0, sel1;  // selector entry nonzero (participates in the sign count)

    static ResolvedUnit from(const DmuParams& p);
};

namespace detail {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Mirrors the op-for-op sequence of core.cpp so the scalar batch kernel and
// the trace-producing forward agree bit-exactly (FP contraction is disabled
// project-wide for this reason).
inline double forward2(const ResolvedUnit& u, double a, double b) {
    const double ma = std::fabs(a);
    const double mb = std::fabs(b);
    const double sa = a < 0.0 ? -1.0 : 1.0;
    const double sb = b < 0.0 ? -1.0 : 1.0;

    double y_lin = 0.0;
    y_lin += u.o0 * a;
    y_lin += u.o1 * b;
    double y_log = 0.0;
    y_log += u.o0 * std::log(std::max(ma, u.mag_min));
    y_log += u.o1 * std::log(std::max(mb, u.mag_min));

    double m = 0.0;
    if (u.sel0) m += 0.5 * (1.0 - sa);
    if (u.sel1) m += 0.5 * (1.0 - sb);

    const double s_lin = std::tanh(y_lin / u.sign_temp);
    const double s_log = std::cos(kPi * m);
    const double s_mix = u.g_lin * s_lin + u.g_log * s_log;

    const double sm = std::sqrt(y_lin * y_lin + u.smooth_abs_eps);
    const double y_lin_log = std::log(std::max(sm, u.mag_min));
    const double y_log_cl = std::min(std::max(y_log, -u.log_lim), u.log_lim);
    const double m_pre = u.g_lin * y_lin_log + u.g_log * y_log_cl;
    const double m_log = std::min(std::max(m_pre, -u.log_lim), u.log_lim);
    return s_mix * std::exp(m_log);
}

}  // namespace detail

struct KernelOps {
    const char* name;
    void (*forward_batch)(const ResolvedUnit&, const double* x0, const double* x1,
                          double* y, std::size_t n);
    // compensated sum of (forward(x) - target)^2
    double (*sq_err_sum)(const ResolvedUnit&, const double* x0, const double* x1,
                         const double* targets, std::size_t n);
};

bool cpu_has_avx2();

const KernelOps& scalar_kernel();
const KernelOps& avx2_kernel();  // valid only when cpu_has_avx2()

// Resolves Auto to the best available kernel. Throws on Avx2 without CPU
// support.
const KernelOps& kernel_ops(KernelKind kind);

KernelKind parse_kernel_kind(const std::string& name);  // auto|scalar|avx2

// Process-wide selection used by modules that do not thread a kind through.
void set_active_kernel(KernelKind kind);
const KernelOps& active_ops();
KernelKind active_kernel_kind();

}  // namespace dmu
