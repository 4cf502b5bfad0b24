#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "dmu/accum.hpp"
#include "dmu/core.hpp"
#include "dmu/eval.hpp"
#include "dmu/kernels.hpp"
#include "dmu/prng.hpp"

using namespace dmu;

namespace {

bool bit_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

// mixed magnitudes, signs, zeros: the awkward inputs
std::vector<double> awkward_inputs(std::uint64_t seed, std::size_t n) {
    Xoshiro256pp rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        const double r = rng.uniform01();
        if (r < 0.05) {
            x = 0.0;
        } else if (r < 0.15) {
            x = rng.uniform(-1e-11, 1e-11);  // below the magnitude floor
        } else if (r < 0.3) {
            x = rng.uniform(-1e6, 1e6);
        } else {
            x = rng.uniform(-20.0, 20.0);
        }
    }
    return v;
}

std::vector<DmuParams> unit_grid() {
    std::vector<DmuParams> units;
    for (const double gv : {0.0, 1e-13, 0.3, 0.5, 1.0 - 1e-5, 1.0}) {
        DmuParams a = DmuParams::nalm_add();
        a.set_gate_value(gv);
        units.push_back(a);
        DmuParams s = DmuParams::nalm_sub();
        s.set_gate_value(gv);
        units.push_back(s);
    }
    DmuParams odd = DmuParams::nalm_add();
    odd.operand_frozen = false;
    odd.operand_selector = {0.7, 0.0};  // one de-selected input
    odd.set_gate_value(0.4);
    units.push_back(odd);
    return units;
}

}  // namespace

TEST_CASE("scalar batch kernel reproduces forward bit for bit") {
    const auto x0 = awkward_inputs(21, 4000);
    const auto x1 = awkward_inputs(22, 4000);
    std::vector<double> y(x0.size());
    for (const auto& p : unit_grid()) {
        const ResolvedUnit unit = ResolvedUnit::from(p);
        scalar_kernel().forward_batch(unit, x0.data(), x1.data(), y.data(), y.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double x[] = {x0[i], x1[i]};
            REQUIRE(bit_equal(y[i], forward_value(p, x)));
        }
    }
}

TEST_CASE("avx2 kernel is equivalent to the scalar reference") {
    if (!cpu_has_avx2()) return;
    const auto x0 = awkward_inputs(31, 4001);  // odd length exercises the tail
    const auto x1 = awkward_inputs(32, 4001);
    std::vector<double> ys(x0.size()), yv(x0.size());
    for (const auto& p : unit_grid()) {
        const ResolvedUnit unit = ResolvedUnit::from(p);
        scalar_kernel().forward_batch(unit, x0.data(), x1.data(), ys.data(), ys.size());
        avx2_kernel().forward_batch(unit, x0.data(), x1.data(), yv.data(), yv.size());
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double denom = std::max(std::fabs(ys[i]), 1e-15);
            REQUIRE(std::fabs(yv[i] - ys[i]) / denom <= 1e-11);
        }
    }
}

TEST_CASE("avx2 squared-error sum matches scalar within accumulation noise") {
    if (!cpu_has_avx2()) return;
    const auto x0 = awkward_inputs(41, 100000);
    const auto x1 = awkward_inputs(42, 100000);
    std::vector<double> targets(x0.size());
    Xoshiro256pp rng(43);
    for (auto& t : targets) t = rng.uniform(-40.0, 40.0);

    for (const auto& p : unit_grid()) {
        const ResolvedUnit unit = ResolvedUnit::from(p);
        const double a = scalar_kernel().sq_err_sum(unit, x0.data(), x1.data(),
                                                    targets.data(), x0.size());
        const double b = avx2_kernel().sq_err_sum(unit, x0.data(), x1.data(),
                                                  targets.data(), x0.size());
        REQUIRE(std::fabs(a - b) <= 1e-11 * std::max(a, 1e-12));
    }
}

TEST_CASE("kernel dispatch") {
    CHECK(std::string(scalar_kernel().name) == "scalar");
    CHECK(std::string(kernel_ops(KernelKind::Scalar).name) == "scalar");
    if (cpu_has_avx2()) {
        CHECK(std::string(kernel_ops(KernelKind::Auto).name) == "avx2");
        CHECK(std::string(kernel_ops(KernelKind::Avx2).name) == "avx2");
    } else {
        CHECK(std::string(kernel_ops(KernelKind::Auto).name) == "scalar");
        CHECK_THROWS(kernel_ops(KernelKind::Avx2));
    }
    CHECK(parse_kernel_kind("auto") == KernelKind::Auto);
    CHECK_THROWS_AS(parse_kernel_kind("sse9"), std::invalid_argument);
}

TEST_CASE("width-2 is required by the batch kernels") {
    DmuParams p = DmuParams::nalm_add();
    p.operand_frozen = false;
    p.operand_selector = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(ResolvedUnit::from(p), std::invalid_argument);
}

TEST_CASE("streaming mse equals the materialized batch mse") {
    // same stream seed, one pass chunked vs one flat batch
    const RangeSpec range = find_range("pos");
    const std::uint64_t stream = 777;
    const long n = 50000;

    Batch flat;
    stream_extrapolation(Op::Mul, range, stream, n, [&](const Batch& chunk) {
        flat.x0.insert(flat.x0.end(), chunk.x0.begin(), chunk.x0.end());
        flat.x1.insert(flat.x1.end(), chunk.x1.begin(), chunk.x1.end());
        flat.targets.insert(flat.targets.end(), chunk.targets.begin(),
                            chunk.targets.end());
    });
    REQUIRE(flat.size() == static_cast<std::size_t>(n));

    DmuParams p = DmuParams::nalm_add();
    p.set_gate_value(0.37);
    const ResolvedUnit unit = ResolvedUnit::from(p);
    const KernelOps& ops = scalar_kernel();
    const double streamed = stream_extrap_mse(ops, unit, Op::Mul, range, stream, n);
    const double batched = batch_mse(ops, unit, flat);
    CHECK(std::fabs(streamed - batched) <= 1e-12 * std::max(streamed, 1e-300));
}
