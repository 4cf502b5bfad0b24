#pragma once

#include <array>
#include <span>
#include <vector>

#include "dmu/core.hpp"

// Reverse-mode gradients of the forward pass. Clamp sites use the hard
// subgradient: once a clamp fires, nothing propagates through it.

namespace dmu {

struct Gradients {
    double d_gate_raw = 0.0;
    std::array<double, 2> d_gate_logits{0.0, 0.0};  // TwoLogit mode only
    std::vector<double> d_operand_selector;         // populated when unfrozen
};

// Pulls d_y_final (the adjoint of the output) back to the learnable
// parameters. The trace must come from forward() with identical params;
// a mismatch is rejected.
Gradients backward(const DmuParams& params, const ForwardTrace& trace,
                   double d_y_final);

// Central finite differences of the squared error (forward(x) - target)^2
// with step h, per learnable parameter. Verification oracle for backward.
Gradients fd_gradient(const DmuParams& params, std::span<const double> x,
                      double target, double h);

// Squared-error loss and its backward pass in one call; returns the loss and
// accumulates parameter gradients scaled by 1/batch implicitly via d_seed.
double squared_error(const DmuParams& params, std::span<const double> x,
                     double target);

}  // namespace dmu
