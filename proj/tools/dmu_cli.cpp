// Command-line front door: train / sweep / thresholds / landscape / dag.
// Exit codes: 0 success, 2 benchmark non-convergence (or tolerance miss),
// 1 tooling error. Every run writes a JSON manifest sufficient to reproduce it.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmu/dag.hpp"
#include "dmu/eval.hpp"
#include "dmu/expr.hpp"
#include "dmu/io.hpp"
#include "dmu/landscape.hpp"
#include "dmu/tasks.hpp"
#include "dmu/thresholds.hpp"
#include "dmu/threadpool.hpp"
#include "dmu/trainer.hpp"
#include "dmu/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct GlobalOpts {
    int jobs = dmu::default_jobs();
    std::string kernel = "auto";
    std::string out_dir;
    std::string ranges_file;
};

std::string resolve_out_dir(const GlobalOpts& g, const std::string& fallback) {
    if (!g.out_dir.empty()) return g.out_dir;
    if (const char* env = std::getenv("DMU_OUT_DIR"); env && *env) return env;
    return fallback;
}

std::vector<dmu::RangeSpec> resolve_ranges(const GlobalOpts& g) {
    if (!g.ranges_file.empty()) return dmu::load_ranges_file(g.ranges_file);
    return dmu::builtin_ranges();
}

std::vector<dmu::Op> parse_ops_list(const std::string& csv) {
    std::vector<dmu::Op> ops;
    for (const auto& tok : dmu::split_csv_line(csv))
        if (!tok.empty()) ops.push_back(dmu::parse_op(tok));
    return ops;
}

std::vector<dmu::RangeSpec> parse_ranges_list(
    const std::string& csv, const std::vector<dmu::RangeSpec>& table) {
    std::vector<dmu::RangeSpec> out;
    if (csv == "all" || csv.empty()) return table;
    for (const auto& tok : dmu::split_csv_line(csv))
        if (!tok.empty()) out.push_back(dmu::find_range(tok, table));
    return out;
}

dmu::GridSpec parse_grid(const std::string& text) {
    // lo:hi:steps
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("grid must be lo:hi:steps, got '" + text + "'");
    dmu::GridSpec g;
    g.lo = dmu::parse_double(text.substr(0, c1));
    g.hi = dmu::parse_double(text.substr(c1 + 1, c2 - c1 - 1));
    g.steps = std::stoi(text.substr(c2 + 1));
    return g;
}

class ManifestWriter {
public:
    ManifestWriter(std::string subcommand, json config)
        : started_(dmu::iso8601_utc_now()),
          t0_(std::chrono::steady_clock::now()),
          doc_{{"subcommand", std::move(subcommand)},
               {"version", DMU_VERSION},
               {"config", std::move(config)}} {}

    void add_output(const std::string& path) { outputs_.push_back(path); }

    void write(const std::string& path) {
        for (const auto& p : outputs_)
            if (!std::filesystem::exists(p))
                throw std::runtime_error("manifest output missing: " + p);
        doc_["outputs"] = outputs_;
        doc_["started"] = started_;
        doc_["finished"] = dmu::iso8601_utc_now();
        doc_["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_)
                .count();
        dmu::write_text_atomic(path, doc_.dump(2) + "\n");
    }

private:
    std::string started_;
    std::chrono::steady_clock::time_point t0_;
    json doc_;
    std::vector<std::string> outputs_;
};

json record_json(const dmu::ExperimentRecord& r) {
    return json{{"op", dmu::op_name(r.op)},
                {"range", r.range},
                {"seed", r.seed},
                {"converged", r.converged},
                {"convergence_step", r.convergence_step},
                {"final_extrap_mse", r.final_extrap_mse},
                {"sparsity", r.sparsity},
                {"threshold", r.threshold},
                {"steps_run", r.steps_run},
                {"final_gate_value", r.final_gate_value},
                {"wall_seconds", r.wall_seconds},
                {"aborted", r.aborted},
                {"diagnostic", r.diagnostic}};
}

struct ThresholdFlags {
    std::string file;
    double epsilon = 1e-5;
    long n = 1'000'000;
    bool fast = false;
    std::uint64_t seed = 1234;
    bool perturb_operands = false;
    double gate_slope = 1.0;
};

void add_threshold_flags(CLI::App* cmd, ThresholdFlags& tf) {
    cmd->add_option("--thresholds", tf.file,
                    "threshold CSV to use instead of recomputing");
    cmd->add_option("--epsilon", tf.epsilon, "perturbation size");
    cmd->add_option("--threshold-n", tf.n, "samples per threshold");
    cmd->add_flag("--fast", tf.fast, "threshold-n = 1e5 (CI mode)");
    cmd->add_option("--threshold-seed", tf.seed, "threshold sample stream seed");
    cmd->add_flag("--perturb-operands", tf.perturb_operands,
                  "also perturb the operand selector entries");
    cmd->add_option("--gate-slope", tf.gate_slope,
                    "gate value moves by epsilon*slope (10 = raw weight "
                    "through the published gate temperature)");
}

dmu::ThresholdConfig threshold_config(const ThresholdFlags& tf,
                                      dmu::KernelKind kernel) {
    dmu::ThresholdConfig cfg;
    cfg.epsilon = tf.epsilon;
    cfg.n = tf.fast ? 100'000 : tf.n;
    cfg.seed = tf.seed;
    cfg.perturb_operands = tf.perturb_operands;
    cfg.gate_slope = tf.gate_slope;
    cfg.kernel = kernel;
    return cfg;
}

// Loads the CSV (stamping seed_hint from flags) or computes the needed cells.
std::vector<dmu::ThresholdRecord> resolve_thresholds(
    const ThresholdFlags& tf, const std::vector<dmu::Op>& ops,
    const std::vector<dmu::RangeSpec>& ranges, dmu::KernelKind kernel, int jobs) {
    if (!tf.file.empty()) {
        auto recs = dmu::parse_threshold_csv(dmu::read_text(tf.file));
        for (auto& r : recs) r.seed_hint = tf.seed;
        return recs;
    }
    return dmu::threshold_table(ops, ranges, threshold_config(tf, kernel), jobs);
}

json train_config_json(const dmu::TrainConfig& c, const ThresholdFlags& tf) {
    return json{{"lr", c.lr},
                {"beta1", c.beta1},
                {"beta2", c.beta2},
                {"adam_eps", c.adam_eps},
                {"batch_size", c.batch_size},
                {"max_steps", c.max_steps},
                {"eval_interval", c.eval_interval},
                {"eval_set_size", c.eval_set_size},
                {"init_gate_raw", c.init_gate_raw},
                {"screen_slack", c.screen_slack},
                {"confirm_backoff_steps", c.confirm_backoff_steps},
                {"threshold_file", tf.file},
                {"epsilon", tf.epsilon},
                {"threshold_n", tf.fast ? 100'000 : tf.n},
                {"threshold_seed", tf.seed},
                {"perturb_operands", tf.perturb_operands},
                {"gate_slope", tf.gate_slope}};
}

int cmd_train(const GlobalOpts& g, const std::string& op_name,
              const std::string& range_name, std::uint64_t seed,
              const dmu::TrainConfig& train_cfg, const ThresholdFlags& tf) {
    const dmu::KernelKind kernel = dmu::parse_kernel_kind(g.kernel);
    const auto ranges = resolve_ranges(g);
    const dmu::Op op = dmu::parse_op(op_name);
    const dmu::RangeSpec& range = dmu::find_range(range_name, ranges);

    dmu::TrainConfig cfg = train_cfg;
    cfg.kernel = kernel;

    const auto thresholds =
        resolve_thresholds(tf, {op}, {range}, kernel, g.jobs);
    const auto& threshold = dmu::find_threshold(thresholds, op, range.name);

    dmu::TaskSpec task;
    task.op = op;
    task.range = range;
    task.seed = seed;
    task.batch_size = cfg.batch_size;

    const dmu::ExperimentRecord rec = dmu::train_one(task, cfg, threshold);
    std::cout << record_json(rec).dump(2) << "\n";

    const std::string out = resolve_out_dir(g, "");
    if (!out.empty()) {
        dmu::ensure_dir(out);
        json cfg_json = train_config_json(cfg, tf);
        cfg_json["op"] = dmu::op_name(op);
        cfg_json["range"] = range.name;
        cfg_json["seed"] = seed;
        cfg_json["jobs"] = g.jobs;
        cfg_json["kernel"] = g.kernel;
        ManifestWriter manifest("train", cfg_json);
        const std::string rec_path = out + "/record.json";
        dmu::write_text_atomic(rec_path, record_json(rec).dump(2) + "\n");
        manifest.add_output(rec_path);
        manifest.write(out + "/train_manifest.json");
    }
    if (rec.aborted) return kExitError;
    return rec.converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const GlobalOpts& g, const std::string& ops_csv,
              const std::string& ranges_csv, int seeds, std::uint64_t base_seed,
              const dmu::TrainConfig& train_cfg, const ThresholdFlags& tf,
              const std::string& baselines_file) {
    const dmu::KernelKind kernel = dmu::parse_kernel_kind(g.kernel);
    const auto table = resolve_ranges(g);

    dmu::SweepConfig cfg;
    cfg.ops = parse_ops_list(ops_csv);
    cfg.ranges = parse_ranges_list(ranges_csv, table);
    cfg.seeds = seeds;
    cfg.base_seed = base_seed;
    cfg.train = train_cfg;
    cfg.train.kernel = kernel;
    if (cfg.ops.empty()) throw std::invalid_argument("no operations selected");
    if (cfg.ranges.empty()) throw std::invalid_argument("no ranges selected");
    if (cfg.seeds < 1) throw std::invalid_argument("--seeds must be >= 1");

    const std::string out = resolve_out_dir(g, "sweep_out");
    dmu::ensure_dir(out);

    const std::size_t total =
        cfg.ops.size() * cfg.ranges.size() * static_cast<std::size_t>(seeds);
    json cfg_json = train_config_json(cfg.train, tf);
    cfg_json["ops"] = ops_csv;
    cfg_json["ranges"] = ranges_csv;
    cfg_json["seeds"] = seeds;
    cfg_json["base_seed"] = base_seed;
    cfg_json["jobs"] = g.jobs;
    cfg_json["kernel"] = g.kernel;
    cfg_json["baselines"] = baselines_file;
    // experiment seeds are base_seed + index, index in (op, range, seed) order
    cfg_json["experiment_seed_rule"] = "base_seed + index";
    cfg_json["experiment_count"] = total;
    ManifestWriter manifest("sweep", cfg_json);

    auto thresholds = resolve_thresholds(tf, cfg.ops, cfg.ranges, kernel, g.jobs);
    if (tf.file.empty()) {
        const std::string thr_path = out + "/thresholds.csv";
        dmu::write_text_atomic(thr_path, dmu::threshold_csv(thresholds));
        manifest.add_output(thr_path);
    }

    const auto records = dmu::sweep(cfg, thresholds, g.jobs);
    const dmu::Summary summary = dmu::summarize(records);

    const std::string records_path = out + "/records.csv";
    dmu::write_text_atomic(records_path, dmu::records_csv(records));
    manifest.add_output(records_path);

    const std::string baselines_csv =
        baselines_file.empty() ? std::string() : dmu::read_text(baselines_file);
    const std::string summary_path = out + "/summary.md";
    dmu::write_text_atomic(summary_path,
                           dmu::summary_markdown(summary, baselines_csv));
    manifest.add_output(summary_path);

    for (const auto& cell : summary.per_cell)
        std::cout << dmu::op_name(cell.op) << "/" << cell.range << ": "
                  << cell.success_pct << "% (" << cell.converged << "/"
                  << cell.runs << ")\n";
    manifest.write(out + "/manifest.json");

    return summary.all_cells_full_success ? kExitOk : kExitNotConverged;
}

int cmd_thresholds(const GlobalOpts& g, const std::string& ops_csv,
                   const std::string& ranges_csv, const ThresholdFlags& tf,
                   std::string out_file) {
    const dmu::KernelKind kernel = dmu::parse_kernel_kind(g.kernel);
    const auto table = resolve_ranges(g);
    const auto ops = parse_ops_list(ops_csv);
    const auto ranges = parse_ranges_list(ranges_csv, table);
    if (ops.empty() || ranges.empty())
        throw std::invalid_argument("no operations or ranges selected");

    const std::string out = resolve_out_dir(g, ".");
    dmu::ensure_dir(out);
    if (out_file.empty()) out_file = out + "/thresholds.csv";

    json cfg_json{{"ops", ops_csv},         {"ranges", ranges_csv},
                  {"epsilon", tf.epsilon},  {"n", tf.fast ? 100'000 : tf.n},
                  {"seed", tf.seed},        {"perturb_operands", tf.perturb_operands},
                  {"jobs", g.jobs},         {"kernel", g.kernel},
                  {"out", out_file}};
    ManifestWriter manifest("thresholds", cfg_json);

    const auto records =
        dmu::threshold_table(ops, ranges, threshold_config(tf, kernel), g.jobs);
    dmu::write_text_atomic(out_file, dmu::threshold_csv(records));
    manifest.add_output(out_file);
    manifest.write(out_file + ".manifest.json");

    std::cout << dmu::threshold_csv(records);
    return kExitOk;
}

int cmd_landscape(const GlobalOpts& g, const std::string& op_name,
                  const std::string& range_name, const std::string& axis1,
                  const std::string& grid1, const std::string& axis2,
                  const std::string& grid2, double o0, double o1,
                  double gate_value, int batch_size, std::uint64_t batch_seed,
                  const std::string& note, std::string out_prefix) {
    const dmu::KernelKind kernel = dmu::parse_kernel_kind(g.kernel);
    const auto ranges = resolve_ranges(g);

    dmu::ScanSpec spec;
    spec.op = dmu::parse_op(op_name);
    spec.range = dmu::find_range(range_name, ranges);
    spec.axis1 = dmu::parse_axis(axis1);
    spec.grid1 = parse_grid(grid1);
    if (!axis2.empty()) {
        spec.axis2 = dmu::parse_axis(axis2);
        spec.grid2 = parse_grid(grid2);
    }
    spec.base = (spec.op == dmu::Op::Add || spec.op == dmu::Op::Mul)
                    ? dmu::DmuParams::nalm_add()
                    : dmu::DmuParams::nalm_sub();
    spec.base.operand_selector[0] = o0;
    spec.base.operand_selector[1] = o1;
    spec.base.operand_frozen = false;
    spec.base.set_gate_value(gate_value);
    spec.batch_size = batch_size;
    spec.batch_seed = batch_seed;
    spec.kernel = kernel;
    spec.note = note;

    const std::string out = resolve_out_dir(g, ".");
    dmu::ensure_dir(out);
    if (out_prefix.empty()) out_prefix = out + "/landscape";

    json cfg_json{{"op", op_name},       {"range", range_name},
                  {"axis1", axis1},      {"grid1", grid1},
                  {"axis2", axis2},      {"grid2", grid2},
                  {"o0", o0},            {"o1", o1},
                  {"gate_value", gate_value}, {"batch_size", batch_size},
                  {"batch_seed", batch_seed}, {"jobs", g.jobs},
                  {"kernel", g.kernel},  {"note", note}};
    ManifestWriter manifest("landscape", cfg_json);

    const dmu::ScanResult result = dmu::scan(spec, g.jobs);
    dmu::write_text_atomic(out_prefix + ".csv", dmu::scan_csv(result));
    dmu::write_text_atomic(out_prefix + ".json", dmu::scan_metadata_json(result));
    manifest.add_output(out_prefix + ".csv");
    manifest.add_output(out_prefix + ".json");
    manifest.write(out_prefix + ".manifest.json");

    if (!spec.axis2) {
        const auto u = dmu::unimodality_check(result.loss, result.axis1_values);
        std::cout << "unimodal=" << (u.unimodal ? "true" : "false")
                  << " minimizer=" << dmu::format_double(u.min_value)
                  << " loss=" << dmu::format_double(u.min_loss) << "\n";
    } else {
        std::cout << result.loss.size() << " grid points written\n";
    }
    return kExitOk;
}

int cmd_dag_compile(const std::string& expr, const std::string& out_file) {
    const dmu::DagProgram program = dmu::compile_expression(expr);
    const std::string text = dmu::dag_serialize(program);
    std::cout << text;
    if (!out_file.empty()) dmu::write_text_atomic(out_file, text);
    return kExitOk;
}

int cmd_dag_run(const std::string& file, const std::string& values_csv) {
    const dmu::DagProgram program = dmu::dag_parse(dmu::read_text(file));
    std::vector<double> values;
    for (const auto& tok : dmu::split_csv_line(values_csv))
        values.push_back(dmu::parse_double(tok));
    std::cout << dmu::format_double(dmu::dag_execute(program, values)) << "\n";
    return kExitOk;
}

int cmd_dag_check(const std::string& expr, long trials, std::uint64_t seed,
                  double tol) {
    const auto res = dmu::differential_test(expr, trials, seed);
    std::cout << "max_rel_err=" << dmu::format_double(res.max_rel_err) << " trials="
              << res.trials << "\n";
    return res.max_rel_err <= tol ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Domain-mixed arithmetic unit benchmark harness"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--jobs", g.jobs, "worker threads (default: hardware)");
    app.add_option("--kernel", g.kernel, "batch kernel: auto|scalar|avx2");
    app.add_option("--out", g.out_dir,
                   "output directory (env DMU_OUT_DIR overrides the default)");
    app.add_option("--ranges-file", g.ranges_file,
                   "range pair table (name lo hi extra_lo extra_hi per line)");

    // train
    auto* train = app.add_subcommand("train", "train one task and print the record");
    std::string t_op, t_range;
    std::uint64_t t_seed = 0;
    dmu::TrainConfig t_cfg;
    ThresholdFlags t_tf;
    train->add_option("--op", t_op, "add|sub|mul|div")->required();
    train->add_option("--range", t_range, "range name")->required();
    train->add_option("--seed", t_seed, "experiment seed");
    train->add_option("--lr", t_cfg.lr, "learning rate");
    train->add_option("--max-steps", t_cfg.max_steps, "step budget");
    train->add_option("--batch-size", t_cfg.batch_size, "batch size");
    train->add_option("--eval-interval", t_cfg.eval_interval, "steps between evals");
    train->add_option("--eval-set-size", t_cfg.eval_set_size, "fixed eval set size");
    train->add_option("--init-gate-raw", t_cfg.init_gate_raw, "gate init");
    train->add_option("--adam-eps", t_cfg.adam_eps, "Adam epsilon");
    train->add_option("--beta1", t_cfg.beta1, "Adam beta1");
    train->add_option("--beta2", t_cfg.beta2, "Adam beta2");
    add_threshold_flags(train, t_tf);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "seed sweep over ops x ranges");
    std::string s_ops = "add,sub,mul,div", s_ranges = "all", s_baselines;
    int s_seeds = 25;
    std::uint64_t s_base_seed = 0;
    dmu::TrainConfig s_cfg;
    ThresholdFlags s_tf;
    sweep->add_option("--ops", s_ops, "comma list of ops");
    sweep->add_option("--ranges", s_ranges, "comma list of range names or 'all'");
    sweep->add_option("--seeds", s_seeds, "seeds per cell");
    sweep->add_option("--base-seed", s_base_seed, "experiment seed origin");
    sweep->add_option("--lr", s_cfg.lr, "learning rate");
    sweep->add_option("--max-steps", s_cfg.max_steps, "step budget");
    sweep->add_option("--batch-size", s_cfg.batch_size, "batch size");
    sweep->add_option("--eval-interval", s_cfg.eval_interval, "steps between evals");
    sweep->add_option("--eval-set-size", s_cfg.eval_set_size, "fixed eval set size");
    sweep->add_option("--init-gate-raw", s_cfg.init_gate_raw, "gate init");
    sweep->add_option("--adam-eps", s_cfg.adam_eps, "Adam epsilon");
    sweep->add_option("--beta1", s_cfg.beta1, "Adam beta1");
    sweep->add_option("--beta2", s_cfg.beta2, "Adam beta2");
    sweep->add_option("--baselines", s_baselines,
                      "published success-rate CSV for the summary tables");
    add_threshold_flags(sweep, s_tf);

    // thresholds
    auto* thr = app.add_subcommand("thresholds", "regenerate the threshold table");
    std::string th_ops = "add,sub,mul,div", th_ranges = "all", th_out;
    ThresholdFlags th_tf;
    thr->add_option("--ops", th_ops, "comma list of ops");
    thr->add_option("--ranges", th_ranges, "comma list of range names or 'all'");
    thr->add_option("--out-file", th_out, "output CSV path");
    add_threshold_flags(thr, th_tf);

    // landscape
    auto* land = app.add_subcommand("landscape", "loss-surface scan");
    std::string l_op, l_range, l_axis1 = "gate_value", l_grid1 = "0:1:51";
    std::string l_axis2, l_grid2 = "0:1:51", l_note, l_prefix;
    double l_o0 = 1.0, l_o1 = 1.0, l_gate = 0.5;
    int l_batch = 2048;
    std::uint64_t l_seed = 7;
    land->add_option("--op", l_op, "add|sub|mul|div")->required();
    land->add_option("--range", l_range, "range name")->required();
    land->add_option("--axis1", l_axis1, "gate_raw|gate_value|o0|o1");
    land->add_option("--grid1", l_grid1, "lo:hi:steps");
    land->add_option("--axis2", l_axis2, "optional second axis");
    land->add_option("--grid2", l_grid2, "lo:hi:steps");
    land->add_option("--o0", l_o0, "fixed O[0]");
    land->add_option("--o1", l_o1, "fixed O[1]");
    land->add_option("--gate-value", l_gate, "fixed gate value");
    land->add_option("--batch-size", l_batch, "loss batch size");
    land->add_option("--batch-seed", l_seed, "loss batch seed");
    land->add_option("--note", l_note, "free-form note copied to metadata");
    land->add_option("--out-prefix", l_prefix, "output path prefix");

    // dag
    auto* dag = app.add_subcommand("dag", "DAG programs");
    dag->require_subcommand(1);
    auto* dagc = dag->add_subcommand("compile", "expression -> program text");
    std::string dc_expr, dc_out;
    dagc->add_option("expr", dc_expr, "arithmetic expression")->required();
    dagc->add_option("--out-file", dc_out, "also write the program here");
    auto* dagr = dag->add_subcommand("run", "evaluate a program file");
    std::string dr_file, dr_values;
    dagr->add_option("file", dr_file, "program file")->required();
    dagr->add_option("--values", dr_values, "comma list of initial values")
        ->required();
    auto* dagk = dag->add_subcommand("check", "differential-test an expression");
    std::string dk_expr;
    long dk_trials = 1000;
    std::uint64_t dk_seed = 0;
    double dk_tol = 1e-5;
    dagk->add_option("expr", dk_expr, "arithmetic expression")->required();
    dagk->add_option("--trials", dk_trials, "random trials");
    dagk->add_option("--seed", dk_seed, "trial stream seed");
    dagk->add_option("--tol", dk_tol, "max relative error for exit 0");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train)
            return cmd_train(g, t_op, t_range, t_seed, t_cfg, t_tf);
        if (*sweep)
            return cmd_sweep(g, s_ops, s_ranges, s_seeds, s_base_seed, s_cfg, s_tf,
                             s_baselines);
        if (*thr) return cmd_thresholds(g, th_ops, th_ranges, th_tf, th_out);
        if (*land)
            return cmd_landscape(g, l_op, l_range, l_axis1, l_grid1, l_axis2,
                                 l_grid2, l_o0, l_o1, l_gate, l_batch, l_seed,
                                 l_note, l_prefix);
        if (*dag) {
            if (*dagc) return cmd_dag_compile(dc_expr, dc_out);
            if (*dagr) return cmd_dag_run(dr_file, dr_values);
            if (*dagk) return cmd_dag_check(dk_expr, dk_trials, dk_seed, dk_tol);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
