#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dmu {

// How the mixing gate is parameterized. The default is a single raw scalar
// pushed through a temperature logistic; the two-logit softmax variant exists
// for landscape experiments where both logits are treated as free weights.
enum class GateMode { SingleRaw, TwoLogit };

struct GatePair {
    double lin = 0.5;
    double log = 0.5;  // always 1 - lin
};

struct DmuParams {
    std::vector<double> operand_selector;     // O, one signed weight per input
    double gate_raw = 0.0;                    // theta (SingleRaw mode)
    std::array<double, 2> gate_logits{0, 0};  // [w_lin, w_log] (TwoLogit mode)
    GateMode gate_mode = GateMode::SingleRaw;
    double sign_temperature = 0.001;  // T in tanh(y_lin / T)
    double gate_temperature = 0.05;  // T_g in logistic(theta / T_g)
    double mag_min = 1e-12;          // clamp floor applied before any log
    double smooth_abs_eps = 1e-8;    // constant under sqrt(y_lin^2 + eps)
    double log_lim = 30.0;           // symmetric clamp bound L in log space
    bool operand_frozen = true;

    bool operator==(const DmuParams&) const = default;

    std::size_t width() const { return operand_selector.size(); }

    GatePair gate() const {
        double z;
        if (gate_mode == GateMode::SingleRaw) {
            z = gate_raw / gate_temperature;
        } else {
            // softmax over two logits reduces to a logistic of their difference
            z = (gate_logits[0] - gate_logits[1]) / gate_temperature;
        }
        GatePair g;
        g.lin = logistic(z);
        g.log = 1.0 - g.lin;
        return g;
    }

    // Sets gate_raw so that gate().lin == g_lin (up to rounding). Accepts the
    // closed interval [0, 1]; the endpoints map to +/-infinity, which the
    // logistic resolves back to exactly 0 or 1.
    void set_gate_value(double g_lin) {
        if (!(g_lin >= 0.0 && g_lin <= 1.0))
            throw std::invalid_argument("gate value must lie in [0, 1]");
        gate_raw = gate_temperature * std::log(g_lin / (1.0 - g_lin));
    }

    void validate() const {
        if (operand_selector.empty())
            throw std::invalid_argument("operand selector must have width >= 1");
        if (!(sign_temperature > 0.0) || !(gate_temperature > 0.0))
            throw std::invalid_argument("temperatures must be positive");
        if (!(mag_min > 0.0)) throw std::invalid_argument("mag_min must be positive");
        if (!(log_lim > 0.0)) throw std::invalid_argument("log_lim must be positive");
        if (operand_frozen) {
            if (width() != 2 || operand_selector[0] != 1.0 ||
                (operand_selector[1] != 1.0 && operand_selector[1] != -1.0))
                throw std::invalid_argument(
                    "frozen operand selector must be [1,1] or [1,-1]");
        }
    }

    static double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

    // Canonical NALM-mode presets: [1,1] covers addition/multiplication,
    // [1,-1] covers subtraction/division.
    static DmuParams nalm_add() {
        DmuParams p;
        p.operand_selector = {1.0, 1.0};
        p.operand_frozen = true;
        return p;
    }

    static DmuParams nalm_sub() {
        DmuParams p;
        p.operand_selector = {1.0, -1.0};
        p.operand_frozen = true;
        return p;
    }
};

}  // namespace dmu
