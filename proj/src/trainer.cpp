#include "dmu/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "dmu/core.hpp"
#include "dmu/grad.hpp"
#include "dmu/io.hpp"
#include "dmu/threadpool.hpp"

namespace dmu {

DmuParams preset_for(Op op, const TrainConfig& cfg) {
    DmuParams p = (op == Op::Add || op == Op::Mul) ? DmuParams::nalm_add()
                                                   : DmuParams::nalm_sub();
    p.gate_raw = cfg.init_gate_raw;
    p.sign_temperature = cfg.sign_temperature;
    return p;
}

namespace {

double gate_sparsity(const DmuParams& p) {
    const double g = p.gate().lin;
    return std::min(g, 1.0 - g);
}

}  // namespace

ExperimentRecord train_one(const TaskSpec& task, const TrainConfig& cfg,
                           const ThresholdRecord& threshold) {
    const auto t_start = std::chrono::steady_clock::now();

    ExperimentRecord rec;
    rec.op = task.op;
    rec.range = task.range.name;
    rec.seed = task.seed;
    rec.threshold = threshold.threshold;

    DmuParams params = preset_for(task.op, cfg);
    AdamScalar adam;

    const KernelOps& ops = kernel_ops(cfg.kernel);
    const Batch eval_set = extrapolation_batch(task, cfg.eval_set_size);
    const std::uint64_t confirm_stream =
        threshold_stream_seed(threshold.seed_hint, task.op, task.range);

    const double inv_batch = 1.0 / static_cast<double>(cfg.batch_size);
    long next_confirm_allowed = 0;

    for (long step = 1; step <= cfg.max_steps; ++step) {
        const Batch batch = sample_batch(task, step);

        double loss = 0.0;
        double grad = 0.0;
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const double x[2] = {batch.x0[i], batch.x1[i]};
            auto [y, trace] = forward(params, x);
            const double err = y - batch.targets[i];
            loss += err * err * inv_batch;
            grad += backward(params, trace, 2.0 * err * inv_batch).d_gate_raw;
        }
        if (!std::isfinite(loss)) {
            rec.aborted = true;
            rec.diagnostic = "non-finite loss at step " + std::to_string(step);
            rec.steps_run = step;
            break;
        }

        params.gate_raw -= adam.step(cfg, grad);
        rec.steps_run = step;

        if (step % cfg.eval_interval == 0) {
            const ResolvedUnit unit = ResolvedUnit::from(params);
            const double screen_mse = batch_mse(ops, unit, eval_set);
            if (screen_mse < cfg.screen_slack * threshold.threshold &&
                step >= next_confirm_allowed) {
                const double confirmed = stream_extrap_mse(
                    ops, unit, task.op, task.range, confirm_stream, threshold.n);
                if (confirmed < threshold.threshold) {
                    rec.converged = true;
                    rec.convergence_step = step;
                    rec.final_extrap_mse = confirmed;
                    break;
                }
                next_confirm_allowed = step + cfg.confirm_backoff_steps;
            }
        }
    }

    if (!rec.converged) {
        const ResolvedUnit unit = ResolvedUnit::from(params);
        rec.final_extrap_mse = stream_extrap_mse(ops, unit, task.op, task.range,
                                                 confirm_stream, threshold.n);
    }
    rec.sparsity = gate_sparsity(params);
    rec.final_gate_value = params.gate().lin;
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return rec;
}

std::vector<ExperimentRecord> sweep(const SweepConfig& cfg,
                                    const std::vector<ThresholdRecord>& thresholds,
                                    int jobs) {
    const std::size_t total =
        cfg.ops.size() * cfg.ranges.size() * static_cast<std::size_t>(cfg.seeds);
    std::vector<ExperimentRecord> records(total);
    parallel_for(total, jobs, [&](std::size_t idx) {
        const std::size_t per_op = cfg.ranges.size() * cfg.seeds;
        const Op op = cfg.ops[idx / per_op];
        const RangeSpec& range = cfg.ranges[(idx % per_op) / cfg.seeds];

        TaskSpec task;
        task.op = op;
        task.range = range;
        task.seed = cfg.base_seed + idx;
        task.batch_size = cfg.train.batch_size;

        try {
            records[idx] =
                train_one(task, cfg.train, find_threshold(thresholds, op, range.name));
        } catch (const std::exception& e) {
            ExperimentRecord rec;
            rec.op = op;
            rec.range = range.name;
            rec.seed = task.seed;
            rec.aborted = true;
            rec.diagnostic = e.what();
            records[idx] = rec;
        }
    });
    return records;
}

Summary summarize(const std::vector<ExperimentRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");

    std::map<int, OpStats> by_op;
    std::map<std::pair<int, std::string>, CellStats> by_cell;
    for (const auto& r : records) {
        auto& os = by_op[static_cast<int>(r.op)];
        os.op = r.op;
        os.runs++;
        auto& cs = by_cell[{static_cast<int>(r.op), r.range}];
        cs.op = r.op;
        cs.range = r.range;
        cs.runs++;
        if (r.converged) {
            os.converged++;
            cs.converged++;
            os.mean_convergence_step += static_cast<double>(r.convergence_step);
            os.mean_sparsity += r.sparsity;
            os.mean_extrap_mse += r.final_extrap_mse;
        }
    }

    Summary s;
    s.all_cells_full_success = true;
    for (auto& [_, os] : by_op) {
        if (os.converged > 0) {
            os.mean_convergence_step /= os.converged;
            os.mean_sparsity /= os.converged;
            os.mean_extrap_mse /= os.converged;
        }
        s.per_op.push_back(os);
    }
    for (auto& [_, cs] : by_cell) {
        cs.success_pct = 100.0 * static_cast<double>(cs.converged) /
                         static_cast<double>(cs.runs);
        if (cs.converged != cs.runs) s.all_cells_full_success = false;
        s.per_cell.push_back(cs);
    }
    return s;
}

std::string records_csv(const std::vector<ExperimentRecord>& records) {
    std::ostringstream ss;
    ss << "op,range,seed,converged,convergence_step,final_extrap_mse,sparsity,"
          "threshold,steps_run,aborted,diagnostic\n";
    for (const auto& r : records) {
        ss << op_name(r.op) << ',' << r.range << ',' << r.seed << ','
           << (r.converged ? 1 : 0) << ',' << r.convergence_step << ','
           << format_double(r.final_extrap_mse) << ',' << format_double(r.sparsity)
           << ',' << format_double(r.threshold) << ',' << r.steps_run << ','
           << (r.aborted ? 1 : 0) << ',' << r.diagnostic << '\n';
    }
    return ss.str();
}

namespace {

// published success-rate columns: table rows "op,range,unit,value"
struct BaselineTable {
    std::vector<std::string> units_for(Op op) const {
        std::vector<std::string> units;
        for (const auto& row : rows) {
            if (row.op != op) continue;
            if (std::find(units.begin(), units.end(), row.unit) == units.end())
                units.push_back(row.unit);
        }
        return units;
    }

    std::string lookup(Op op, const std::string& range,
                       const std::string& unit) const {
        for (const auto& row : rows)
            if (row.op == op && row.range == range && row.unit == unit)
                return row.value;
        return "-";
    }

    struct Row {
        Op op;
        std::string range, unit, value;
    };
    std::vector<Row> rows;
};

BaselineTable parse_baselines(const std::string& csv) {
    BaselineTable t;
    std::istringstream in(csv);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line == "op,range,unit,value") continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 4) continue;
        t.rows.push_back({parse_op(f[0]), f[1], f[2], f[3]});
    }
    return t;
}

std::string pct(double v) {
    std::ostringstream ss;
    ss << v << "%";
    return ss.str();
}

}  // namespace

std::string summary_markdown(const Summary& summary,
                             const std::string& baselines_csv) {
    const BaselineTable baselines =
        baselines_csv.empty() ? BaselineTable{} : parse_baselines(baselines_csv);

    std::ostringstream md;
    md << "# Sweep summary\n\n";
    md << "## Per-operation statistics\n\n";
    md << "| Operation | Mean Conv. Step | Mean Sparsity | Mean Extrapolation Error |\n";
    md << "|---|---|---|---|\n";
    for (const auto& os : summary.per_op) {
        md << "| " << op_name(os.op) << " | " << format_double(os.mean_convergence_step)
           << " | " << format_double(os.mean_sparsity) << " | "
           << format_double(os.mean_extrap_mse) << " |\n";
    }
    md << "\n";

    const char* unit_label[] = {"DMU_add", "DMU_sub", "DMU_add", "DMU_sub"};
    const char* op_title[] = {"Addition", "Subtraction", "Multiplication",
                              "Division"};
    for (Op op : kAllOps) {
        const int oi = static_cast<int>(op);
        const bool have_rows =
            std::any_of(summary.per_cell.begin(), summary.per_cell.end(),
                        [op](const CellStats& cs) { return cs.op == op; });
        if (!have_rows) continue;
        const auto units = baselines.units_for(op);
        md << "## " << op_title[oi] << " success rates (%)\n\n";
        md << "| Range | " << unit_label[oi];
        for (const auto& u : units) md << " | " << u << " (published)";
        md << " |\n|---|---";
        for (std::size_t i = 0; i < units.size(); ++i) md << "|---";
        md << "|\n";
        for (const auto& cs : summary.per_cell) {
            if (cs.op != op) continue;
            md << "| " << cs.range << " | " << pct(cs.success_pct);
            for (const auto& u : units) md << " | " << baselines.lookup(op, cs.range, u);
            md << " |\n";
        }
        md << "\n";
    }
    return md.str();
}

}  // namespace dmu
