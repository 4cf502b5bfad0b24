#pragma once

namespace dmu {

// Kahan compensated accumulator. Streaming sums must match batch sums to
// ~1e-12 relative over 1e6 terms, which plain summation does not guarantee.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

}  // namespace dmu
