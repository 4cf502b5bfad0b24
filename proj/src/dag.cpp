#include "dmu/dag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dmu/io.hpp"

namespace dmu {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

void DagProgram::validate() const {
    if (num_initial < 1)
        throw std::invalid_argument("dag: num_initial must be >= 1");
    if (steps.empty()) throw std::invalid_argument("dag: depth must be >= 1");
    const int m = width();
    for (int n = 0; n < depth(); ++n) {
        const auto& st = steps[n];
        if (static_cast<int>(st.selector.size()) != m)
            throw std::invalid_argument("dag: step " + std::to_string(n) +
                                        " selector length != M");
        for (int i = num_initial + n; i < m; ++i) {
            if (st.selector[i] != 0.0)
                throw std::invalid_argument(
                    "dag: step " + std::to_string(n) +
                    " violates the causal mask at slot " + std::to_string(i));
        }
        if (!(st.gate >= 0.0 && st.gate <= 1.0))
            throw std::invalid_argument("dag: gate of step " + std::to_string(n) +
                                        " outside [0, 1]");
    }
    if (select_index >= m)
        throw std::invalid_argument("dag: selection index out of range");
}

std::pair<double, DagTrace> dag_execute_traced(const DagProgram& program,
                                               std::span<const double> initial) {
    program.validate();
    if (static_cast<int>(initial.size()) != program.num_initial)
        throw std::invalid_argument("dag: expected " +
                                    std::to_string(program.num_initial) +
                                    " initial values, got " +
                                    std::to_string(initial.size()));
    for (std::size_t i = 0; i < initial.size(); ++i)
        if (!std::isfinite(initial[i]))
            throw std::invalid_argument("dag: non-finite initial value at index " +
                                        std::to_string(i));

    const DagUnitConfig& u = program.unit;
    const int m = program.width();

    DagTrace t;
    t.program = program;
    t.work_mag.assign(m, 0.0);
    t.work_sign.assign(m, 1.0);
    for (int i = 0; i < program.num_initial; ++i) {
        t.work_mag[i] = std::fabs(initial[i]);
        t.work_sign[i] = initial[i] < 0.0 ? -1.0 : 1.0;
    }

    t.steps.resize(program.depth());
    for (int n = 0; n < program.depth(); ++n) {
        const DagStep& step = program.steps[n];
        DagStepTrace& st = t.steps[n];
        const double g = step.gate;

        double y_lin = 0.0, y_log = 0.0, count = 0.0;
        for (int i = 0; i < m; ++i) {
            const double o = step.selector[i];
            if (o == 0.0) continue;
            y_lin += o * (t.work_mag[i] * t.work_sign[i]);
            y_log += o * std::log(std::max(t.work_mag[i], u.mag_min));
            count += 0.5 * (1.0 - t.work_sign[i]);
        }
        st.y_lin = y_lin;
        st.y_log = y_log;
        st.sign_count = count;
        st.s_lin = std::tanh(y_lin / u.sign_temperature);
        st.s_log = std::cos(kPi * count);
        st.s_mix = g * st.s_lin + (1.0 - g) * st.s_log;

        st.smooth_abs = std::sqrt(y_lin * y_lin + u.smooth_abs_eps);
        st.lin_log_floor = st.smooth_abs < u.mag_min;
        st.y_lin_log = std::log(std::max(st.smooth_abs, u.mag_min));
        st.y_log_clamp = y_log < -u.log_lim || y_log > u.log_lim;
        st.y_log_clamped = std::min(std::max(y_log, -u.log_lim), u.log_lim);
        st.m_log_pre = g * st.y_lin_log + (1.0 - g) * st.y_log_clamped;
        st.m_log_clamp = st.m_log_pre < -u.log_lim || st.m_log_pre > u.log_lim;
        st.m_log = std::min(std::max(st.m_log_pre, -u.log_lim), u.log_lim);
        st.mag_out = std::exp(st.m_log);

        t.work_mag[program.num_initial + n] = st.mag_out;
        t.work_sign[program.num_initial + n] = st.s_mix;
    }

    const int sel = program.selection();
    t.output = t.work_mag[sel] * t.work_sign[sel];
    return {t.output, std::move(t)};
}

double dag_execute(const DagProgram& program, std::span<const double> initial) {
    return dag_execute_traced(program, initial).first;
}

DagGradients dag_backward(const DagTrace& trace, double d_output) {
    const DagProgram& program = trace.program;
    const DagUnitConfig& u = program.unit;
    const int m = program.width();

    DagGradients g;
    g.d_gate.assign(program.depth(), 0.0);
    g.d_selector.assign(program.depth(), std::vector<double>(m, 0.0));

    std::vector<double> a_mag(m, 0.0), a_sign(m, 0.0);
    const int sel = program.selection();
    a_mag[sel] = d_output * trace.work_sign[sel];
    a_sign[sel] = d_output * trace.work_mag[sel];

    for (int n = program.depth() - 1; n >= 0; --n) {
        const int k = program.num_initial + n;
        const DagStep& step = program.steps[n];
        const DagStepTrace& st = trace.steps[n];
        const double gate = step.gate;

        const double d_mag_out = a_mag[k];
        const double d_sign_out = a_sign[k];
        if (d_mag_out == 0.0 && d_sign_out == 0.0) continue;

        const double d_m_log = d_mag_out * st.mag_out;
        const double d_m_pre = st.m_log_clamp ? 0.0 : d_m_log;

        // an active clamp may hold inf in y_lin_log; branch, don't multiply
        g.d_gate[n] += d_sign_out * (st.s_lin - st.s_log) +
                       (st.m_log_clamp
                            ? 0.0
                            : d_m_pre * (st.y_lin_log - st.y_log_clamped));

        const double d_y_lin =
            d_m_pre * gate *
                (st.lin_log_floor
                     ? 0.0
                     : st.y_lin / (st.y_lin * st.y_lin + u.smooth_abs_eps)) +
            d_sign_out * gate * (1.0 - st.s_lin * st.s_lin) / u.sign_temperature;
        const double d_y_log = st.y_log_clamp ? 0.0 : d_m_pre * (1.0 - gate);
        const double d_count = d_sign_out * (1.0 - gate) *
                               (-kPi * std::sin(kPi * st.sign_count));

        for (int i = 0; i < k; ++i) {
            const double mag = trace.work_mag[i];
            const double sign = trace.work_sign[i];
            const double log_mag = std::log(std::max(mag, u.mag_min));
            // gradient w.r.t. the selector entry (mask held constant)
            g.d_selector[n][i] = d_y_lin * (mag * sign) + d_y_log * log_mag;

            const double o = step.selector[i];
            if (o == 0.0) continue;
            a_mag[i] += d_y_lin * o * sign +
                        d_y_log * o * (mag > u.mag_min ? 1.0 / mag : 0.0);
            a_sign[i] += d_y_lin * o * mag + d_count * (-0.5);
        }
    }
    return g;
}

std::string dag_serialize(const DagProgram& program) {
    std::ostringstream ss;
    ss << "inputs " << program.num_initial << '\n';
    ss << "steps " << program.depth() << '\n';
    for (int n = 0; n < program.depth(); ++n) {
        const DagStep& st = program.steps[n];
        ss << n << ": [";
        for (std::size_t i = 0; i < st.selector.size(); ++i) {
            if (i) ss << ',';
            ss << format_double(st.selector[i]);
        }
        ss << "] " << format_double(st.gate) << '\n';
    }
    if (program.select_index >= 0) ss << "select " << program.select_index << '\n';
    if (!(program.unit == DagUnitConfig{})) {
        ss << "unit " << format_double(program.unit.sign_temperature) << ' '
           << format_double(program.unit.mag_min) << ' '
           << format_double(program.unit.smooth_abs_eps) << ' '
           << format_double(program.unit.log_lim) << '\n';
    }
    return ss.str();
}

DagProgram dag_parse(const std::string& text) {
    DagProgram p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_inputs = false, have_steps = false;
    int declared_steps = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw std::runtime_error("dag program line " + std::to_string(lineno) +
                                 ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string head;
        if (!(ss >> head)) continue;

        if (head == "inputs") {
            if (!(ss >> p.num_initial)) fail("expected 'inputs N'");
            have_inputs = true;
        } else if (head == "steps") {
            if (!(ss >> declared_steps)) fail("expected 'steps N'");
            have_steps = true;
        } else if (head == "select") {
            if (!(ss >> p.select_index)) fail("expected 'select K'");
        } else if (head == "unit") {
            std::string t, mm, eps, ll;
            if (!(ss >> t >> mm >> eps >> ll))
                fail("expected 'unit T mag_min eps L'");
            p.unit.sign_temperature = parse_double(t);
            p.unit.mag_min = parse_double(mm);
            p.unit.smooth_abs_eps = parse_double(eps);
            p.unit.log_lim = parse_double(ll);
        } else {
            // "n: [a,b,...] gate"
            if (head.empty() || head.back() != ':') fail("unrecognized line");
            const auto lb = line.find('[');
            const auto rb = line.find(']');
            if (lb == std::string::npos || rb == std::string::npos || rb < lb)
                fail("expected '[...]' selector row");
            DagStep step;
            std::string inner = line.substr(lb + 1, rb - lb - 1);
            for (auto& cell : split_csv_line(inner)) {
                cell.erase(std::remove_if(cell.begin(), cell.end(),
                                          [](char c) { return c == ' '; }),
                           cell.end());
                step.selector.push_back(parse_double(cell));
            }
            std::istringstream tail(line.substr(rb + 1));
            std::string gate_text;
            if (!(tail >> gate_text)) fail("missing gate value after selector");
            step.gate = parse_double(gate_text);
            p.steps.push_back(std::move(step));
        }
    }

    if (!have_inputs) throw std::runtime_error("dag program: missing 'inputs' line");
    if (have_steps && declared_steps != p.depth())
        throw std::runtime_error("dag program: declared steps " +
                                 std::to_string(declared_steps) + " but found " +
                                 std::to_string(p.depth()));
    p.validate();
    return p;
}

}  // namespace dmu
