#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dmu/tasks.hpp"
#include "dmu/thresholds.hpp"

// Single-task training runs and seed sweeps. NALM mode: the operand selector
// stays frozen to its canonical pattern and Adam moves only the raw gate.
//
// Convergence: every eval_interval steps the unit's MSE on a fixed evaluation
// set is screened against screen_slack * threshold; when the screen passes,
// the claim is confirmed by streaming the full threshold sample sequence
// (same stream seed as threshold generation). Confirming on the identical
// stream makes the pass/fail decision independent of sampling luck in the
// cells whose optimum carries irreducible error.

namespace dmu {

struct TrainConfig {
    double lr = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.99;
    double adam_eps = 1e-12;
    int batch_size = 128;
    long max_steps = 50'000;
    long eval_interval = 10;
    long eval_set_size = 10'000;
    double init_gate_raw = 0.0;
    double sign_temperature = DmuParams{}.sign_temperature;
    double screen_slack = 4.0;
    long confirm_backoff_steps = 200;
    KernelKind kernel = KernelKind::Auto;
};

// Bias-corrected Adam on one scalar.
struct AdamScalar {
    double m = 0.0;
    double v = 0.0;
    long t = 0;

    // returns the update to subtract from the parameter
    double step(const TrainConfig& cfg, double g) {
        ++t;
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g * g;
        const double m_hat = m / (1.0 - std::pow(cfg.beta1, static_cast<double>(t)));
        const double v_hat = v / (1.0 - std::pow(cfg.beta2, static_cast<double>(t)));
        return cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
    }
};

struct ExperimentRecord {
    Op op = Op::Add;
    std::string range;
    std::uint64_t seed = 0;
    bool converged = false;
    long convergence_step = -1;  // -1 when not converged
    double final_extrap_mse = 0.0;
    double sparsity = 0.0;  // min(G_lin, 1 - G_lin) at the final step
    double threshold = 0.0;
    long steps_run = 0;
    double final_gate_value = 0.0;
    double wall_seconds = 0.0;  // excluded from the records CSV (nondeterministic)
    bool aborted = false;
    std::string diagnostic;
};

// Canonical preset for an operation: add/mul ride the [1,1] unit, sub/div the
// [1,-1] unit.
DmuParams preset_for(Op op, const TrainConfig& cfg);

ExperimentRecord train_one(const TaskSpec& task, const TrainConfig& cfg,
                           const ThresholdRecord& threshold);

struct SweepConfig {
    std::vector<Op> ops;
    std::vector<RangeSpec> ranges;
    int seeds = 25;
    std::uint64_t base_seed = 0;
    TrainConfig train;
};

struct OpStats {
    Op op = Op::Add;
    long runs = 0;
    long converged = 0;
    double mean_convergence_step = 0.0;  // over converged runs
    double mean_sparsity = 0.0;          // over converged runs
    double mean_extrap_mse = 0.0;        // over converged runs
};

struct CellStats {
    Op op = Op::Add;
    std::string range;
    long runs = 0;
    long converged = 0;
    double success_pct = 0.0;
};

struct Summary {
    std::vector<OpStats> per_op;
    std::vector<CellStats> per_cell;
    bool all_cells_full_success = false;
};

Summary summarize(const std::vector<ExperimentRecord>& records);

// Runs the grid; experiment seeds are base_seed + experiment_index with index
// in (op, range, seed) row-major order. Failures are recorded, not fatal.
std::vector<ExperimentRecord> sweep(const SweepConfig& cfg,
                                    const std::vector<ThresholdRecord>& thresholds,
                                    int jobs);

std::string records_csv(const std::vector<ExperimentRecord>& records);

// Markdown with the per-op statistics block and one success-rate table per
// operation. baselines_csv may be empty; when present its published columns
// are appended next to ours.
std::string summary_markdown(const Summary& summary,
                             const std::string& baselines_csv);

}  // namespace dmu
