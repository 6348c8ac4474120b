#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "feasflow/presets.hpp"
#include "feasflow/runner.hpp"

using namespace feasflow;

TEST_CASE("run_experiment writes a trace and summarizes it") {
    ExperimentConfig config = preset("infeasible1d");
    config.sim.t_end = 2.0;
    config.output_path = "runner_test_trace.csv";
    std::ostringstream out, err;
    CHECK(run_experiment(config, out, err) == kExitOk);
    CHECK(err.str().empty());

    std::ifstream csv(config.output_path);
    CHECK(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,x_1_1,x_2_1,R_1,R_2,Q,diameter");
    std::remove(config.output_path.c_str());

    const std::string summary = out.str();
    CHECK(summary.find("final diameter") != std::string::npos);
    CHECK(summary.find("final total violation Q") != std::string::npos);
    CHECK(summary.find("contraction constants") != std::string::npos);
}

TEST_CASE("run_experiment reports blow-ups as runtime failures") {
    ExperimentConfig config = preset("infeasible1d");
    // Steep quadratics with an oversized gain make Euler diverge fast.
    Eigen::MatrixXd q(1, 1);
    q << 1e6;
    const ConvexScalarFunction steep(ConvexQuadratic{q, Eigen::VectorXd::Zero(1), 0.0});
    config.problem = FeasibilityProblem(1, {steep, steep});
    config.gain = StepSizeSchedule(Harmonic{1e6, 1.0});
    config.sim.t_end = 2.0;
    config.output_path = "runner_blowup.csv";
    std::ostringstream out, err;
    CHECK(run_experiment(config, out, err) == kExitRuntime);
    CHECK(err.str().find("non-finite") != std::string::npos);
    std::remove(config.output_path.c_str());
}

TEST_CASE("check_graph prints verdicts rather than failing") {
    SUBCASE("shipped schedule") {
        std::ostringstream out;
        CHECK(check_graph(preset("example1"), out) == kExitOk);
        const std::string text = out.str();
        CHECK(text.find("schedule balanced: yes") != std::string::npos);
        CHECK(text.find("strongly connected: yes") != std::string::npos);
        CHECK(text.find("lambda") != std::string::npos);
    }
    SUBCASE("one-way pair is reported unbalanced") {
        ExperimentConfig config = preset("infeasible1d");
        std::vector<std::tuple<int, int, double>> one_way = {{0, 1, 1.0}};
        config.schedule = GraphSchedule({{1.0, WeightedDigraph::from_edges(2, one_way)}});
        std::ostringstream out;
        CHECK(check_graph(config, out) == kExitOk);
        CHECK(out.str().find("schedule balanced: no") != std::string::npos);
    }
}

TEST_CASE("verify_bound distinguishes assumption failures from bound checks") {
    SUBCASE("pass on a valid schedule") {
        std::ostringstream out, err;
        const auto pairs = pair_grid(0.0, 10.0, 3);
        CHECK(verify_bound(preset("example2"), pairs, 1e-3, out, err) == kExitOk);
        CHECK(out.str().find("overall: pass") != std::string::npos);
    }
    SUBCASE("unbalanced schedule is a validation failure") {
        ExperimentConfig config = preset("infeasible1d");
        std::vector<std::tuple<int, int, double>> one_way = {{0, 1, 1.0}};
        config.schedule = GraphSchedule({{1.0, WeightedDigraph::from_edges(2, one_way)}});
        std::ostringstream out, err;
        CHECK(verify_bound(config, {{0.0, 1.0}}, 1e-3, out, err) == kExitValidation);
    }
}

TEST_CASE("pair_grid spans the requested window") {
    const auto pairs = pair_grid(0.0, 20.0, 5);
    CHECK(pairs.size() == 15);  // ordered pairs with s <= t from 5 grid points
    for (const auto& [s, t] : pairs) {
        CHECK(s <= t);
        CHECK(s >= 0.0);
        CHECK(t <= 20.0);
    }
    CHECK_THROWS_AS(pair_grid(5.0, 1.0, 3), Error);
}
