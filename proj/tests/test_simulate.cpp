#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "distfobs/simulate.hpp"
#include "support/models.hpp"

using namespace distfobs;

namespace {

Scenario motivating_scenario() {
    Scenario sc{testsup::motivating_model()};
    sc.x0 = (Vector(2) << 1.0, 1.0).finished();
    sc.horizon = 200;
    sc.rho = 0.2;
    return sc;
}

int data_rows(const std::string& csv) {
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    return lines - 1;  // minus header
}

}  // namespace

TEST_CASE("auto_precision_bits tracks the plant growth") {
    CHECK(auto_precision_bits(testsup::motivating_model().A, 200) == 380);

    Matrix stable(2, 2);
    stable << 0.5, 0.3, 0.0, 0.4;
    CHECK(auto_precision_bits(stable, 100000) == 53);

    // growth beyond any reasonable mantissa is capped
    Matrix hot(1, 1);
    hot << 2.0;
    CHECK(auto_precision_bits(hot, 100000) == 4096);
}

TEST_CASE("run_simulate: psi column equals L A^k x0") {
    Scenario sc = motivating_scenario();
    sc.horizon = 30;
    const SimulationTrace t = run_simulate(sc);
    REQUIRE(t.steps() == 30);
    REQUIRE(t.function_count == 1);
    REQUIRE(t.node_count == 3);

    Vector x = sc.x0;
    for (long k = 0; k <= 30; ++k) {
        const double ref = (sc.model.L * x)(0);
        const double got = t.psi[static_cast<size_t>(k)](0);
        CHECK(std::abs(got - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
        x = sc.model.A * x;
    }
}

TEST_CASE("run_simulate: truth-seeded estimates never drift") {
    // z0 = T_D^T Sigma x0 at every node makes the initial error exactly zero;
    // the update then reproduces the plant recursion term for term, so the
    // recorded error norms stay identically zero.
    Scenario sc = motivating_scenario();
    sc.horizon = 50;
    const Vector z0 = (Vector(2) << sc.x0(1), sc.x0(0)).finished();
    sc.initial_estimates = std::vector<Vector>{z0, z0, z0};
    const SimulationTrace t = run_simulate(sc);
    for (const auto& step : t.err_norm)
        for (double e : step) CHECK(e == 0.0);
}

TEST_CASE("run_simulate: proposed observer converges on the unstable plant") {
    const Scenario sc = motivating_scenario();
    const SimulationTrace t = run_simulate(sc);
    CHECK(t.precision_bits == 380);
    REQUIRE(t.steps() == 200);
    for (double e : t.err_norm.back()) CHECK(e <= 1e-6);
    // and the truth has genuinely exploded, so this is not vacuous
    CHECK(std::abs(t.psi.back()(0)) > 1e10);
}

TEST_CASE("run_simulate honours a precision override") {
    Scenario sc = motivating_scenario();
    sc.horizon = 10;
    sc.precision_bits = 64;
    const SimulationTrace t = run_simulate(sc);
    CHECK(t.precision_bits == 64);
}

TEST_CASE("run_simulate rejects initial estimates of the wrong length") {
    Scenario sc = motivating_scenario();
    sc.initial_estimates =
        std::vector<Vector>{Vector::Zero(1), Vector::Zero(1), Vector::Zero(1)};
    CHECK_THROWS_AS(run_simulate(sc), DimensionMismatch);
}

TEST_CASE("run_simulate: naive trace matches the explicit recursion") {
    Scenario sc = load_scenario_file(
        std::string(DISTFOBS_SOURCE_DIR "/scenarios/unstable2_ring3_naive.json"));
    REQUIRE(sc.mode == SimMode::naive);
    REQUIRE(sc.naive.has_value());
    const SimulationTrace t = run_simulate(sc);
    REQUIRE(t.steps() == 20);

    // replay in plain double
    const auto& np = *sc.naive;
    Vector x = sc.x0;
    Vector xhat = Vector::Zero(3);
    for (long k = 0; k <= 20; ++k) {
        const double psi = (sc.model.L * x)(0);
        CHECK(std::abs(t.psi[static_cast<size_t>(k)](0) - psi) <=
              1e-9 * std::max(1.0, std::abs(psi)));
        for (int i = 0; i < 3; ++i) {
            const double got = t.psi_hat[static_cast<size_t>(k)][static_cast<size_t>(i)](0);
            CHECK(std::abs(got - xhat(i)) <= 1e-9 * std::max(1.0, std::abs(xhat(i))));
        }
        if (k == 20) break;
        const double y = (sc.model.sensors[0] * x)(0);
        Vector next(3);
        for (int i = 1; i <= 3; ++i) {
            double acc = np.alphas(i - 1) * (np.weights.row(i - 1) * xhat).value();
            const auto nb = sc.model.graph.neighborhood(i);
            if (std::find(nb.begin(), nb.end(), 1) != nb.end())
                acc += np.betas(i - 1) * y;
            next(i - 1) = acc;
        }
        xhat = next;
        x = sc.model.A * x;
    }

    // the node with no path to the measurement diverges with the plant
    CHECK(t.err_norm.back()[2] >= 1e3);
}

TEST_CASE("run_simulate: naive mode without explicit params self-configures") {
    Scenario sc = motivating_scenario();
    sc.mode = SimMode::naive;
    sc.horizon = 20;
    const SimulationTrace t = run_simulate(sc);
    // same qualitative outcome: the blind node cannot track
    CHECK(t.err_norm.back()[2] >= 1e3);
}

TEST_CASE("run_simulate: naive mode refuses a plant outside its span") {
    SystemModel m = testsup::motivating_model();
    m.A << 0, 1, -1, 0;  // rotation: L A leaves span{L, C_1}
    m.sensors[0] << 1, 0;
    Scenario sc{m};
    sc.x0 = Vector::Ones(2);
    sc.mode = SimMode::naive;
    CHECK_THROWS_AS(run_simulate(sc), ModeUnsupported);
}

TEST_CASE("run_simulate propagates infeasibility") {
    SystemModel m{Matrix(2, 2), {Matrix(1, 2), Matrix(0, 2), Matrix(0, 2)},
                  Matrix::Identity(2, 2), DiGraph(3)};
    m.A << 2, 0, 0, 3;
    m.sensors[0] << 1, 0;  // mode 3 is invisible yet must be reconstructed
    m.graph.add_edge(1, 2);
    m.graph.add_edge(2, 3);
    m.graph.add_edge(3, 1);
    Scenario sc{m};
    sc.x0 = Vector::Ones(2);
    CHECK_THROWS_AS(run_simulate(sc), NoFeasibleLeaderSet);
}

TEST_CASE("trace CSV: layout, determinism, round trip") {
    Scenario sc = motivating_scenario();
    sc.horizon = 5;
    const SimulationTrace t = run_simulate(sc);

    const std::string csv = trace_to_csv(t);
    CHECK(csv.rfind("k,psi_1,node,psihat_1,err_norm\n", 0) == 0);
    CHECK(data_rows(csv) == 6 * 3);
    CHECK(trace_to_csv(t) == csv);  // byte-deterministic

    const SimulationTrace back = parse_trace_csv(csv);
    CHECK(back.function_count == 1);
    CHECK(back.node_count == 3);
    REQUIRE(back.steps() == 5);
    for (size_t k = 0; k < t.psi.size(); ++k) {
        CHECK(back.psi[k](0) == t.psi[k](0));
        for (size_t i = 0; i < 3; ++i) {
            CHECK(back.psi_hat[k][i](0) == t.psi_hat[k][i](0));
            CHECK(back.err_norm[k][i] == t.err_norm[k][i]);
        }
    }
    // a second serialisation of the parsed trace is byte-identical too
    CHECK(trace_to_csv(back) == csv);
}

TEST_CASE("trace CSV: full-horizon row count") {
    const Scenario sc = motivating_scenario();
    const SimulationTrace t = run_simulate(sc);
    CHECK(data_rows(trace_to_csv(t)) == 201 * 3);
}

TEST_CASE("trace CSV: file round trip and error paths") {
    Scenario sc = motivating_scenario();
    sc.horizon = 3;
    const SimulationTrace t = run_simulate(sc);
    const std::string path = "trace_tmp.csv";
    write_trace_csv(t, path);
    const SimulationTrace back = load_trace_csv(path);
    CHECK(trace_to_csv(back) == trace_to_csv(t));
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_trace_csv("/nonexistent/trace.csv"), IoError);
    CHECK_THROWS_AS(parse_trace_csv(""), ParseError);
    CHECK_THROWS_AS(parse_trace_csv("a,b,c\n"), ParseError);
    CHECK_THROWS_AS(parse_trace_csv("k,psi_1,node,psihat_1,err_norm\n"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_trace_csv("k,psi_1,node,psihat_1,err_norm\n0,1.0,2,1.0,0.0\n"),
        ParseError);  // nodes must start at 1
    CHECK_THROWS_AS(
        parse_trace_csv("k,psi_1,node,psihat_1,err_norm\n0,1.0,1,oops,0.0\n"),
        ParseError);
}

TEST_CASE("run_check surveys the model without throwing") {
    const Scenario sc = motivating_scenario();
    const CheckReport rep = run_check(sc);
    CHECK(rep.validation.ok());
    CHECK(rep.darouach_rank);
    CHECK(rep.darouach_detect);
    CHECK(rep.grid_consistent);
    CHECK(rep.feasible);
    CHECK(rep.r_star == 2);
    CHECK(rep.detectable_dim == 2);
    REQUIRE(rep.minimal_sets.size() == 1);
    CHECK(rep.minimal_sets[0].nodes == std::set<int>{1});

    const auto j = rep.to_json();
    CHECK(j["feasible"].get<bool>());
    CHECK(j["r_star"].get<int>() == 2);
}

TEST_CASE("run_check reports infeasibility as a result") {
    SystemModel m{Matrix(2, 2), {Matrix(1, 2), Matrix(0, 2), Matrix(0, 2)},
                  Matrix::Identity(2, 2), DiGraph(3)};
    m.A << 2, 0, 0, 3;
    m.sensors[0] << 1, 0;
    m.graph.add_edge(1, 2);
    m.graph.add_edge(2, 3);
    m.graph.add_edge(3, 1);
    Scenario sc{m};
    sc.x0 = Vector::Ones(2);
    const CheckReport rep = run_check(sc);  // must not throw
    CHECK(rep.validation.ok());
    CHECK_FALSE(rep.feasible);
    CHECK(rep.minimal_sets.empty());
    CHECK(rep.r_star == 0);
    CHECK_FALSE(rep.to_json()["feasible"].get<bool>());
}

TEST_CASE("run_analyze produces a coherent report") {
    const Scenario sc = motivating_scenario();
    const AnalysisReport rep = run_analyze(sc);
    CHECK(rep.selection.r_star == 2);
    CHECK(rep.design.leaders == std::vector<int>{1});
    CHECK(rep.error_dynamics.spectral_radius == doctest::Approx(0.5).epsilon(1e-9));

    const auto j = rep.to_json();
    CHECK(j["feasible"].get<bool>());
    CHECK(j["r_star"].get<int>() == 2);
    CHECK(j["error_spectral_radius"].get<double>() == doctest::Approx(0.5));
    CHECK(j["rho"].get<double>() == 0.2);
}
