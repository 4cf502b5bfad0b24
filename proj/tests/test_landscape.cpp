#include <doctest.h>

#include <cmath>

#include "dmu/landscape.hpp"

using namespace dmu;

namespace {

ScanSpec gate_scan(Op op, const char* range, int steps = 41) {
    ScanSpec spec;
    spec.op = op;
    spec.range = find_range(range);
    spec.axis1 = AxisId::GateValue;
    spec.grid1 = {0.0, 1.0, steps};
    spec.base = (op == Op::Add || op == Op::Mul) ? DmuParams::nalm_add()
                                                 : DmuParams::nalm_sub();
    spec.kernel = KernelKind::Auto;
    return spec;
}

}  // namespace

TEST_CASE("axis parsing") {
    CHECK(parse_axis("gate_value") == AxisId::GateValue);
    CHECK(parse_axis("o1") == AxisId::O1);
    CHECK_THROWS_AS(parse_axis("o7"), std::invalid_argument);
    CHECK(std::string(axis_name(AxisId::GateRaw)) == "gate_raw");
}

TEST_CASE("grid shape and csv row count") {
    ScanSpec spec = gate_scan(Op::Add, "pos", 51);
    spec.axis2 = AxisId::O1;
    spec.grid2 = {-2.0, 2.0, 51};
    const ScanResult res = scan(spec, 2);
    CHECK(res.loss.size() == 2601);
    const std::string csv = scan_csv(res);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 2602);  // header + 2601 data rows
    CHECK(csv.rfind("gate_value,o1,loss\n", 0) == 0);
}

TEST_CASE("every grid loss is finite and non-negative") {
    ScanSpec spec = gate_scan(Op::Div, "sym", 21);
    spec.axis2 = AxisId::O1;
    spec.grid2 = {-2.0, 2.0, 21};
    const ScanResult res = scan(spec, 2);
    for (const double v : res.loss) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }
}

TEST_CASE("pure log gate minimizes the multiplication scan") {
    const ScanResult res = scan(gate_scan(Op::Mul, "pos"), 1);
    const auto u = unimodality_check(res.loss, res.axis1_values);
    CHECK(u.unimodal);
    // exact log-domain multiply has zero loss, so the minimum sits at the
    // pure-log boundary of the gate axis
    CHECK(u.min_index == 0);
    CHECK(res.axis1_values[u.min_index] == 0.0);
    CHECK(u.min_loss <= 1e-15);
}

TEST_CASE("pure linear gate minimizes the addition scan") {
    const ScanResult res = scan(gate_scan(Op::Add, "pos"), 1);
    const auto u = unimodality_check(res.loss, res.axis1_values);
    CHECK(u.unimodal);
    CHECK(u.min_index == res.loss.size() - 1);
}

TEST_CASE("unimodality check on hand sequences") {
    const std::vector<double> increasing{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> axis{0.0, 1.0, 2.0, 3.0};
    auto u = unimodality_check(increasing, axis);
    CHECK(u.unimodal);
    CHECK(u.min_index == 0);  // minimizer at the left edge

    const std::vector<double> zigzag{1.0, 0.0, 1.0, 0.0};
    CHECK(!unimodality_check(zigzag, axis).unimodal);

    const std::vector<double> vee{3.0, 1.0, 0.5, 2.0};
    CHECK(unimodality_check(vee, axis).unimodal);

    CHECK_THROWS(unimodality_check(std::vector<double>{}, axis));
}

TEST_CASE("scans are deterministic") {
    const ScanResult a = scan(gate_scan(Op::Sub, "p11", 31), 2);
    const ScanResult b = scan(gate_scan(Op::Sub, "p11", 31), 1);
    CHECK(a.loss == b.loss);
    CHECK(scan_csv(a) == scan_csv(b));
}

TEST_CASE("subtraction surface pushes o1 away from -1 somewhere") {
    // 2-D scan over (O[1], gate value). On log-leaning gate rows the descent
    // direction in O[1] points away from the correct -1 (toward ever more
    // negative values, where the prediction collapses to a plateau).
    ScanSpec spec;
    spec.op = Op::Sub;
    spec.range = find_range("pos");
    spec.axis1 = AxisId::O1;
    spec.grid1 = {-2.0, 2.0, 21};
    spec.axis2 = AxisId::GateValue;
    spec.grid2 = {0.0, 1.0, 21};
    spec.base = DmuParams::nalm_sub();
    const ScanResult res = scan(spec, 2);

    bool found = false;
    const std::size_t n2 = res.axis2_values.size();
    for (std::size_t i = 0; i + 1 < res.axis1_values.size() && !found; ++i) {
        for (std::size_t j = 0; j < n2 && !found; ++j) {
            const double lo = res.loss[i * n2 + j];
            const double hi = res.loss[(i + 1) * n2 + j];
            // descent to the right of -1 moving right, or to the left moving left
            if (res.axis1_values[i] > -1.0 && hi < lo) found = true;
            if (res.axis1_values[i + 1] < -1.0 && lo < hi) found = true;
        }
    }
    CHECK(found);

    // at a near-linear gate the surface funnels to the correct -1
    const std::size_t j_lin = n2 - 1;
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.axis1_values.size(); ++i)
        if (res.loss[i * n2 + j_lin] < res.loss[best * n2 + j_lin]) best = i;
    CHECK(res.axis1_values[best] == doctest::Approx(-1.0).epsilon(0.11));
}

TEST_CASE("metadata json names the axes") {
    ScanSpec spec = gate_scan(Op::Mul, "pos");
    spec.note = "smoke";
    const ScanResult res = scan(spec, 1);
    const std::string meta = scan_metadata_json(res);
    CHECK(meta.find("\"op\": \"mul\"") != std::string::npos);
    CHECK(meta.find("\"gate_value\"") != std::string::npos);
    CHECK(meta.find("\"note\": \"smoke\"") != std::string::npos);
    CHECK(meta.find("\"axis2\"") == std::string::npos);
}

TEST_CASE("grid validation") {
    ScanSpec spec = gate_scan(Op::Add, "pos");
    spec.grid1.steps = 1;
    CHECK_THROWS_AS(scan(spec, 1), std::invalid_argument);
    spec.grid1 = {1.0, 0.0, 11};
    CHECK_THROWS_AS(scan(spec, 1), std::invalid_argument);
}
