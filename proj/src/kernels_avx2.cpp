// AVX2 + FMA batch kernel. Compiled with -mavx2 -mfma in its own TU; callers
// must gate on cpu_has_avx2(). The vector exp/log/tanh below are accurate to
// a few ulp over the operating ranges (log args >= mag_min, exp args in
// [-50, 50]), which the kernel equivalence tests pin down.

#include "dmu/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "dmu/accum.hpp"

namespace dmu {
namespace {

inline __m256d vset(double v) { return _mm256_set1_pd(v); }

inline __m256d v_abs(__m256d x) {
    return _mm256_andnot_pd(vset(-0.0), x);
}

// e^x via r = x - k*ln2, degree-13 Taylor on |r| <= ln2/2, 2^k exponent build.
inline __m256d v_exp(__m256d x) {
    const __m256d log2e = vset(1.4426950408889634074);
    const __m256d ln2_hi = vset(6.93147180369123816490e-01);
    const __m256d ln2_lo = vset(1.90821492927058770002e-10);

    x = _mm256_max_pd(_mm256_min_pd(x, vset(700.0)), vset(-700.0));
    const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
    r = _mm256_fnmadd_pd(k, ln2_lo, r);

    __m256d p = vset(1.6059043836821614599e-10);  // 1/13!
    p = _mm256_fmadd_pd(p, r, vset(2.0876756987868098979e-09));   // 1/12!
    p = _mm256_fmadd_pd(p, r, vset(2.5052108385441718775e-08));   // 1/11!
    p = _mm256_fmadd_pd(p, r, vset(2.7557319223985890653e-07));   // 1/10!
    p = _mm256_fmadd_pd(p, r, vset(2.7557319223985892510e-06));   // 1/9!
    p = _mm256_fmadd_pd(p, r, vset(2.4801587301587301566e-05));   // 1/8!
    p = _mm256_fmadd_pd(p, r, vset(1.9841269841269841253e-04));   // 1/7!
    p = _mm256_fmadd_pd(p, r, vset(1.3888888888888889418e-03));   // 1/6!
    p = _mm256_fmadd_pd(p, r, vset(8.3333333333333332177e-03));   // 1/5!
    p = _mm256_fmadd_pd(p, r, vset(4.1666666666666664354e-02));   // 1/4!
    p = _mm256_fmadd_pd(p, r, vset(1.6666666666666665741e-01));   // 1/3!
    p = _mm256_fmadd_pd(p, r, vset(5.0e-01));
    p = _mm256_fmadd_pd(p, r, vset(1.0));
    p = _mm256_fmadd_pd(p, r, vset(1.0));

    const __m128i k32 = _mm256_cvtpd_epi32(k);
    const __m256i k64 = _mm256_cvtepi32_epi64(k32);
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// log(x) for normal positive x: mantissa reduction to [sqrt(1/2), sqrt(2)),
// atanh series in s = (m-1)/(m+1) through s^19.
inline __m256d v_log(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exp_raw = _mm256_srli_epi64(bits, 52);

    // biased exponent to double via the 2^52 magic constant
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(exp_raw, magic)),
                              _mm256_castsi256_pd(magic));
    e = _mm256_sub_pd(e, vset(1023.0));

    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffll);
    const __m256i one_bits = _mm256_set1_epi64x(0x3ff0000000000000ll);
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

    const __m256d big = _mm256_cmp_pd(m, vset(1.4142135623730951), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, vset(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, vset(1.0)));

    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, vset(1.0)),
                                    _mm256_add_pd(m, vset(1.0)));
    const __m256d z = _mm256_mul_pd(s, s);

    __m256d q = vset(1.0 / 19.0);
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 17.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 15.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 13.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 11.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 9.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 7.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 5.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0 / 3.0));
    q = _mm256_fmadd_pd(q, z, vset(1.0));
    const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), q);

    const __m256d ln2_hi = vset(6.93147180369123816490e-01);
    const __m256d ln2_lo = vset(1.90821492927058770002e-10);
    __m256d r = _mm256_fmadd_pd(e, ln2_lo, log_m);
    r = _mm256_fmadd_pd(e, ln2_hi, r);
    return r;
}

// tanh via odd Taylor polynomial below 0.125, exp form above; exact +/-1 past
// the saturation cut, matching std::tanh.
inline __m256d v_tanh(__m256d x) {
    const __m256d ax = v_abs(x);
    const __m256d sign_bits = _mm256_and_pd(x, vset(-0.0));

    // large branch: 1 - 2/(e^{2|x|} + 1)
    const __m256d t = _mm256_min_pd(_mm256_add_pd(ax, ax), vset(50.0));
    const __m256d q = v_exp(t);
    const __m256d big =
        _mm256_sub_pd(vset(1.0), _mm256_div_pd(vset(2.0), _mm256_add_pd(q, vset(1.0))));

    // small branch: x * P(x^2)
    const __m256d z = _mm256_mul_pd(x, x);
    __m256d p = vset(21844.0 / 6081075.0);
    p = _mm256_fmadd_pd(p, z, vset(-1382.0 / 155925.0));
    p = _mm256_fmadd_pd(p, z, vset(62.0 / 2835.0));
    p = _mm256_fmadd_pd(p, z, vset(-17.0 / 315.0));
    p = _mm256_fmadd_pd(p, z, vset(2.0 / 15.0));
    p = _mm256_fmadd_pd(p, z, vset(-1.0 / 3.0));
    p = _mm256_fmadd_pd(p, z, vset(1.0));
    const __m256d small = _mm256_mul_pd(x, p);

    const __m256d use_small = _mm256_cmp_pd(ax, vset(0.125), _CMP_LT_OQ);
    return _mm256_blendv_pd(_mm256_or_pd(big, sign_bits), small, use_small);
}

struct VecUnit {
    __m256d o0, o1, g_lin, g_log, sign_temp;  // sign temperature (divided)
    __m256d mag_min, eps, lim_pos, lim_neg;
    __m256d sel0_mask, sel1_mask;
};

inline VecUnit load_unit(const ResolvedUnit& u) {
    VecUnit v;
    v.o0 = vset(u.o0);
    v.o1 = vset(u.o1);
    v.g_lin = vset(u.g_lin);
    v.g_log = vset(u.g_log);
    v.sign_temp = vset(u.sign_temp);
    v.mag_min = vset(u.mag_min);
    v.eps = vset(u.smooth_abs_eps);
    v.lim_pos = vset(u.log_lim);
    v.lim_neg = vset(-u.log_lim);
    const __m256d all = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));
    v.sel0_mask = u.sel0 ? all : _mm256_setzero_pd();
    v.sel1_mask = u.sel1 ? all : _mm256_setzero_pd();
    return v;
}

inline __m256d v_forward2(const VecUnit& u, __m256d a, __m256d b) {
    const __m256d ma = v_abs(a);
    const __m256d mb = v_abs(b);
    const __m256d la = v_log(_mm256_max_pd(ma, u.mag_min));
    const __m256d lb = v_log(_mm256_max_pd(mb, u.mag_min));

    const __m256d y_lin = _mm256_add_pd(_mm256_mul_pd(u.o0, a), _mm256_mul_pd(u.o1, b));
    const __m256d y_log = _mm256_add_pd(_mm256_mul_pd(u.o0, la), _mm256_mul_pd(u.o1, lb));

    const __m256d zero = _mm256_setzero_pd();
    const __m256d neg_a = _mm256_and_pd(_mm256_cmp_pd(a, zero, _CMP_LT_OQ), u.sel0_mask);
    const __m256d neg_b = _mm256_and_pd(_mm256_cmp_pd(b, zero, _CMP_LT_OQ), u.sel1_mask);
    // counted negatives enter through cos(pi*m); with hard signs only parity matters
    const __m256d odd = _mm256_xor_pd(neg_a, neg_b);
    const __m256d s_log = _mm256_blendv_pd(vset(1.0), vset(-1.0), odd);

    const __m256d s_lin = v_tanh(_mm256_div_pd(y_lin, u.sign_temp));
    const __m256d s_mix =
        _mm256_add_pd(_mm256_mul_pd(u.g_lin, s_lin), _mm256_mul_pd(u.g_log, s_log));

    const __m256d sm = _mm256_sqrt_pd(_mm256_fmadd_pd(y_lin, y_lin, u.eps));
    const __m256d y_lin_log = v_log(_mm256_max_pd(sm, u.mag_min));
    const __m256d y_log_cl = _mm256_min_pd(_mm256_max_pd(y_log, u.lim_neg), u.lim_pos);
    const __m256d m_pre = _mm256_add_pd(_mm256_mul_pd(u.g_lin, y_lin_log),
                                        _mm256_mul_pd(u.g_log, y_log_cl));
    const __m256d m_log = _mm256_min_pd(_mm256_max_pd(m_pre, u.lim_neg), u.lim_pos);
    return _mm256_mul_pd(s_mix, v_exp(m_log));
}

void forward_batch_avx2(const ResolvedUnit& ru, const double* x0, const double* x1,
                        double* y, std::size_t n) {
    const VecUnit u = load_unit(ru);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x0 + i);
        const __m256d b = _mm256_loadu_pd(x1 + i);
        _mm256_storeu_pd(y + i, v_forward2(u, a, b));
    }
    for (; i < n; ++i) y[i] = detail::forward2(ru, x0[i], x1[i]);
}

double sq_err_sum_avx2(const ResolvedUnit& ru, const double* x0, const double* x1,
                       const double* targets, std::size_t n) {
    const VecUnit u = load_unit(ru);
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = _mm256_loadu_pd(x0 + i);
        const __m256d b = _mm256_loadu_pd(x1 + i);
        const __m256d t = _mm256_loadu_pd(targets + i);
        const __m256d e = _mm256_sub_pd(v_forward2(u, a, b), t);
        const __m256d sq = _mm256_mul_pd(e, e);
        // vector Kahan step
        const __m256d yk = _mm256_sub_pd(sq, comp);
        const __m256d tk = _mm256_add_pd(sum, yk);
        comp = _mm256_sub_pd(_mm256_sub_pd(tk, sum), yk);
        sum = tk;
    }
    alignas(32) double lane_sum[4], lane_comp[4];
    _mm256_store_pd(lane_sum, sum);
    _mm256_store_pd(lane_comp, comp);
    KahanSum acc;
    for (int l = 0; l < 4; ++l) {
        acc.add(lane_sum[l]);
        acc.add(-lane_comp[l]);
    }
    for (; i < n; ++i) {
        const double e = detail::forward2(ru, x0[i], x1[i]) - targets[i];
        acc.add(e * e);
    }
    return acc.value();
}

const KernelOps kAvx2Ops{"avx2", &forward_batch_avx2, &sq_err_sum_avx2};

}  // namespace

const KernelOps& avx2_kernel() { return kAvx2Ops; }

}  // namespace dmu

#else

namespace dmu {

const KernelOps& avx2_kernel() { return scalar_kernel(); }

}  // namespace dmu

#endif
