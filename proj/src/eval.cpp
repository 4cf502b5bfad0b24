#include "dmu/eval.hpp"

#include "dmu/accum.hpp"

namespace dmu {

double batch_mse(const KernelOps& ops, const ResolvedUnit& unit, const Batch& batch) {
    const double sum = ops.sq_err_sum(unit, batch.x0.data(), batch.x1.data(),
                                      batch.targets.data(), batch.size());
    return sum / static_cast<double>(batch.size());
}

double stream_extrap_mse(const KernelOps& ops, const ResolvedUnit& unit, Op op,
                         const RangeSpec& range, std::uint64_t stream_seed, long n) {
    KahanSum total;
    stream_extrapolation(op, range, stream_seed, n, [&](const Batch& chunk) {
        total.add(ops.sq_err_sum(unit, chunk.x0.data(), chunk.x1.data(),
                                 chunk.targets.data(), chunk.size()));
    });
    return total.value() / static_cast<double>(n);
}

std::uint64_t threshold_stream_seed(std::uint64_t seed, Op op, const RangeSpec& range) {
    return derive_stream(seed, StreamKind::Threshold,
                         static_cast<std::uint64_t>(op), fnv1a(range.name.c_str()));
}

}  // namespace dmu
