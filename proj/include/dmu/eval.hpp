#pragma once

#include "dmu/kernels.hpp"
#include "dmu/tasks.hpp"

// Batch / streaming MSE of a fixed-parameter unit, on top of the kernels.

namespace dmu {

double batch_mse(const KernelOps& ops, const ResolvedUnit& unit, const Batch& batch);

double stream_extrap_mse(const KernelOps& ops, const ResolvedUnit& unit, Op op,
                         const RangeSpec& range, std::uint64_t stream_seed, long n);

// One derivation shared by threshold generation and training-time convergence
// confirmation, so both see the same sample sequence.
std::uint64_t threshold_stream_seed(std::uint64_t seed, Op op, const RangeSpec& range);

}  // namespace dmu
