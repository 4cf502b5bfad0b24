#include "dmu/kernels.hpp"

#include <atomic>
#include <stdexcept>

#include "dmu/accum.hpp"

namespace dmu {

ResolvedUnit ResolvedUnit::from(const DmuParams& p) {
    if (p.width() != 2)
        throw std::invalid_argument("batch kernels require width-2 units");
    const GatePair g = p.gate();
    ResolvedUnit u;
    u.o0 = p.operand_selector[0];
    u.o1 = p.operand_selector[1];
    u.g_lin = g.lin;
    u.g_log = g.log;
    u.sign_temp = p.sign_temperature;
    u.mag_min = p.mag_min;
    u.smooth_abs_eps = p.smooth_abs_eps;
    u.log_lim = p.log_lim;
    u.sel0 = u.o0 != 0.0;
    u.sel1 = u.o1 != 0.0;
    return u;
}

namespace {

void forward_batch_scalar(const ResolvedUnit& u, const double* x0, const double* x1,
                          double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = detail::forward2(u, x0[i], x1[i]);
}

double sq_err_sum_scalar(const ResolvedUnit& u, const double* x0, const double* x1,
                         const double* targets, std::size_t n) {
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = detail::forward2(u, x0[i], x1[i]) - targets[i];
        acc.add(e * e);
    }
    return acc.value();
}

const KernelOps kScalarOps{"scalar", &forward_batch_scalar, &sq_err_sum_scalar};

std::atomic<KernelKind> g_active{KernelKind::Auto};

}  // namespace

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelOps& scalar_kernel() { return kScalarOps; }

const KernelOps& kernel_ops(KernelKind kind) {
    switch (kind) {
        case KernelKind::Scalar:
            return scalar_kernel();
        case KernelKind::Avx2:
            if (!cpu_has_avx2())
                throw std::runtime_error("avx2 kernel requested but CPU lacks AVX2/FMA");
            return avx2_kernel();
        case KernelKind::Auto:
        default:
            return cpu_has_avx2() ? avx2_kernel() : scalar_kernel();
    }
}

KernelKind parse_kernel_kind(const std::string& name) {
    if (name == "auto") return KernelKind::Auto;
    if (name == "scalar") return KernelKind::Scalar;
    if (name == "avx2") return KernelKind::Avx2;
    throw std::invalid_argument("unknown kernel '" + name + "' (auto|scalar|avx2)");
}

void set_active_kernel(KernelKind kind) { g_active.store(kind); }

const KernelOps& active_ops() { return kernel_ops(g_active.load()); }

KernelKind active_kernel_kind() { return g_active.load(); }

}  // namespace dmu
