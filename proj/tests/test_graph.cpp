#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "feasflow/graph.hpp"

using namespace feasflow;

namespace {

WeightedDigraph ring(int n, int offset) {
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < n; ++i) {
        edges.emplace_back(i, (i + offset) % n, 1.0);
    }
    return WeightedDigraph::from_edges(n, edges);
}

std::vector<Edge> ring_edges(int n, int offset) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        edges.push_back({i, (i + offset) % n});
    }
    return edges;
}

/// Same periodic weight trajectory started `offset` into the period.
GraphSchedule shift_schedule(const GraphSchedule& schedule, double offset) {
    REQUIRE(offset > 0.0);
    REQUIRE(offset < schedule.period());
    const auto& segs = schedule.segments();
    const auto& ends = schedule.segment_ends();
    std::size_t k = 0;
    while (offset >= ends[k]) {
        ++k;
    }
    std::vector<ScheduleSegment> shifted;
    shifted.push_back({ends[k] - offset, segs[k].graph});
    for (std::size_t j = k + 1; j < segs.size(); ++j) {
        shifted.push_back(segs[j]);
    }
    for (std::size_t j = 0; j < k; ++j) {
        shifted.push_back(segs[j]);
    }
    const double head = offset - (k == 0 ? 0.0 : ends[k - 1]);
    if (head > 0.0) {
        shifted.push_back({head, segs[k].graph});
    }
    return GraphSchedule(std::move(shifted));
}

}  // namespace

TEST_CASE("digraph construction rejects invalid weights") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 1) = -1.0;
    CHECK_THROWS_AS(WeightedDigraph{w}, Error);
    w(0, 1) = 1.0;
    w(1, 1) = 0.5;
    CHECK_THROWS_AS(WeightedDigraph{w}, Error);
    CHECK_THROWS_AS(WeightedDigraph{0}, Error);
    std::vector<std::tuple<int, int, double>> self_loop = {{0, 0, 1.0}};
    CHECK_THROWS_AS(WeightedDigraph::from_edges(2, self_loop), Error);
}

TEST_CASE("adjacency_at is right-continuous and periodic") {
    const WeightedDigraph g1 = ring(4, 1);
    const WeightedDigraph g2 = ring(4, 2);

    SUBCASE("constant schedule") {
        GraphSchedule constant({{1.0, g1}});
        CHECK(adjacency_at(constant, 7.3) == g1);
    }
    SUBCASE("switch instant takes the new segment") {
        GraphSchedule two({{0.15, g1}, {0.15, g2}});
        CHECK(adjacency_at(two, 0.0) == g1);
        CHECK(adjacency_at(two, 0.15) == g2);
        CHECK(adjacency_at(two, 0.30) == g1);
        CHECK(adjacency_at(two, 0.31) == g1);
        CHECK(adjacency_at(two, 0.45) == g2);
        CHECK_THROWS_AS(adjacency_at(two, -0.1), Error);
    }
}

TEST_CASE("laplacian matches the degree/off-diagonal definition") {
    SUBCASE("zero graph") {
        CHECK(laplacian(WeightedDigraph(3)).isZero(0.0));
    }
    SUBCASE("two agents, unit weights both ways") {
        std::vector<std::tuple<int, int, double>> edges = {{0, 1, 1.0}, {1, 0, 1.0}};
        const Eigen::MatrixXd lap = laplacian(WeightedDigraph::from_edges(2, edges));
        Eigen::MatrixXd expected(2, 2);
        expected << 1, -1, -1, 1;
        CHECK(lap == expected);
    }
    SUBCASE("directed three-ring") {
        // a_13 = a_21 = a_32 = 1 (1-based indexing).
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
        w(0, 2) = 1.0;
        w(1, 0) = 1.0;
        w(2, 1) = 1.0;
        const Eigen::MatrixXd lap = laplacian(WeightedDigraph{w});
        Eigen::MatrixXd expected(3, 3);
        expected << 1, 0, -1, -1, 1, 0, 0, -1, 1;
        CHECK(lap == expected);
    }
    SUBCASE("rows sum to zero exactly for random graphs") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> dist(0.0, 3.0);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 7);
            Eigen::MatrixXd w(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    w(i, j) = i == j ? 0.0 : dist(rng);
                }
            }
            const Eigen::MatrixXd lap = laplacian(WeightedDigraph{w});
            for (int i = 0; i < n; ++i) {
                double off_diagonal = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (j != i) {
                        off_diagonal += lap(i, j);
                    }
                }
                CHECK(lap(i, i) + off_diagonal == 0.0);
            }
        }
    }
}

TEST_CASE("is_balanced") {
    GraphSchedule ring9({{1.0, ring(9, 1)}});
    CHECK(is_balanced(ring9, 0.0));

    std::vector<std::tuple<int, int, double>> one_way = {{0, 1, 1.0}};
    GraphSchedule lopsided({{1.0, WeightedDigraph::from_edges(2, one_way)}});
    CHECK_FALSE(is_balanced(lopsided, 1e-9));

    GraphSchedule two_rings({{0.15, ring(9, 1)}, {0.15, ring(9, 2)}});
    CHECK(is_balanced(two_rings, 0.0));
}

TEST_CASE("delta_graph integrates weights over one period") {
    SUBCASE("constant unit ring") {
        GraphSchedule schedule({{1.0, ring(5, 1)}});
        const DeltaGraph dg = delta_graph(schedule);
        CHECK(dg.T == 1.0);
        CHECK(dg.delta == doctest::Approx(1.0));
        auto expected = ring_edges(5, 1);
        auto actual = dg.edges;
        std::sort(actual.begin(), actual.end());
        std::sort(expected.begin(), expected.end());
        CHECK(actual == expected);
    }
    SUBCASE("two disjoint rings") {
        GraphSchedule schedule({{0.15, ring(9, 1)}, {0.15, ring(9, 2)}});
        const DeltaGraph dg = delta_graph(schedule);
        CHECK(dg.T == doctest::Approx(0.3));
        CHECK(dg.delta == doctest::Approx(0.15));
        CHECK(dg.edges.size() == 18);
    }
    SUBCASE("weight 2 for half the period integrates to 1") {
        std::vector<std::tuple<int, int, double>> heavy = {{0, 1, 2.0}};
        std::vector<std::tuple<int, int, double>> light = {{1, 0, 1.0}};
        GraphSchedule schedule({{0.5, WeightedDigraph::from_edges(2, heavy)},
                                {0.5, WeightedDigraph::from_edges(2, light)}});
        const DeltaGraph dg = delta_graph(schedule);
        CHECK(dg.edges.size() == 2);
        CHECK(dg.delta == doctest::Approx(0.5));  // the light edge
        double heavy_integral = 0.0;
        for (const auto& seg : schedule.segments()) {
            heavy_integral += seg.duration * seg.graph.weight(1, 0);
        }
        CHECK(heavy_integral == doctest::Approx(1.0));
    }
    SUBCASE("empty edge set is a result, not an error") {
        GraphSchedule schedule({{1.0, WeightedDigraph(3)}});
        const DeltaGraph dg = delta_graph(schedule);
        CHECK(dg.edges.empty());
    }
}

TEST_CASE("delta_graph is invariant under schedule shifts") {
    GraphSchedule schedule({{0.15, ring(9, 1)}, {0.15, ring(9, 2)}});
    const DeltaGraph base = delta_graph(schedule);
    auto base_edges = base.edges;
    std::sort(base_edges.begin(), base_edges.end());
    for (double offset : {0.05, 0.15, 0.22, 0.299}) {
        const GraphSchedule shifted = shift_schedule(schedule, offset);
        const DeltaGraph dg = delta_graph(shifted);
        auto edges = dg.edges;
        std::sort(edges.begin(), edges.end());
        CHECK(edges == base_edges);
        CHECK(dg.delta == doctest::Approx(base.delta).epsilon(1e-12));
        CHECK(dg.T == doctest::Approx(base.T).epsilon(1e-12));
    }
}

TEST_CASE("is_strongly_connected") {
    CHECK(is_strongly_connected(ring_edges(9, 1), 9));

    std::vector<Edge> disjoint;
    for (int i = 0; i < 3; ++i) {
        disjoint.push_back({i, (i + 1) % 3});
        disjoint.push_back({3 + i, 3 + (i + 1) % 3});
    }
    CHECK_FALSE(is_strongly_connected(disjoint, 6));

    auto with_chords = ring_edges(9, 1);
    with_chords.push_back({0, 4});
    with_chords.push_back({2, 7});
    CHECK(is_strongly_connected(with_chords, 9));

    CHECK_FALSE(is_strongly_connected({}, 2));
    CHECK(is_strongly_connected({}, 1));
}

TEST_CASE("contraction constants") {
    SUBCASE("two agents, delta 1, T 1") {
        std::vector<std::tuple<int, int, double>> edges = {{0, 1, 1.0}, {1, 0, 1.0}};
        GraphSchedule schedule({{1.0, WeightedDigraph::from_edges(2, edges)}});
        const ContractionConstants c = contraction_constants(schedule);
        CHECK(c.lambda == 1.0 - 1.0 / 32.0);  // exact: 0.96875
        CHECK(c.H == doctest::Approx(32.0 / 31.0).epsilon(1e-15));
        CHECK(c.gamma == doctest::Approx(std::sqrt(0.96875)).epsilon(1e-15));
        CHECK(c.delta == doctest::Approx(1.0));
        CHECK(c.T == 1.0);
    }
    SUBCASE("single agent is degenerate") {
        GraphSchedule schedule({{1.0, WeightedDigraph(1)}});
        CHECK_THROWS_AS(contraction_constants(schedule), DegenerateNetwork);
    }
    SUBCASE("nine agents on the two-ring schedule") {
        GraphSchedule schedule({{0.15, ring(9, 1)}, {0.15, ring(9, 2)}});
        const ContractionConstants c = contraction_constants(schedule);
        const double expected_lambda = 1.0 - 1.0 / std::pow(648.0, 4);
        CHECK(c.lambda == doctest::Approx(expected_lambda).epsilon(1e-15));
        // floor(1/0.15) + 1 = 7 windows, floor(9/2) = 4, T = 0.3.
        CHECK(c.gamma ==
              doctest::Approx(std::pow(c.lambda, 1.0 / (7.0 * 4.0 * 0.3))).epsilon(1e-15));
    }
    SUBCASE("pure function of (n, delta, T)") {
        GraphSchedule schedule({{0.15, ring(9, 1)}, {0.15, ring(9, 2)}});
        const ContractionConstants c = contraction_constants(schedule);
        const DeltaGraph dg = delta_graph(schedule);
        const ContractionConstants c2 = contraction_constants_from(9, dg.delta, dg.T);
        CHECK(c.lambda == c2.lambda);
        CHECK(c.gamma == c2.gamma);
        CHECK(c.H == c2.H);
        CHECK(c.delta == c2.delta);
        CHECK(c.T == c2.T);
    }
    SUBCASE("unbalanced schedule is rejected") {
        std::vector<std::tuple<int, int, double>> edges = {{0, 1, 1.0}, {1, 0, 2.0}};
        GraphSchedule schedule({{1.0, WeightedDigraph::from_edges(2, edges)}});
        CHECK_THROWS_AS(contraction_constants(schedule), NotBalanced);
    }
    SUBCASE("disconnected delta-graph is rejected") {
        GraphSchedule schedule({{1.0, WeightedDigraph(3)}});
        CHECK_THROWS_AS(contraction_constants(schedule), NotConnected);
    }
}

TEST_CASE("transition matrix") {
    SUBCASE("identity at t == s") {
        GraphSchedule schedule({{1.0, ring(4, 1)}});
        const Eigen::MatrixXd phi = transition_matrix(schedule, 3.0, 3.0, 1e-3);
        CHECK(phi == Eigen::MatrixXd::Identity(4, 4));
    }
    SUBCASE("two-agent closed form") {
        std::vector<std::tuple<int, int, double>> edges = {{0, 1, 1.0}, {1, 0, 1.0}};
        GraphSchedule schedule({{1.0, WeightedDigraph::from_edges(2, edges)}});
        // Exact solution: 0.5 * [[1+e^(-2t), 1-e^(-2t)], [1-e^(-2t), 1+e^(-2t)]].
        const Eigen::MatrixXd phi1 = transition_matrix(schedule, 0.0, 1.0, 1e-3);
        const double e2 = std::exp(-2.0);
        CHECK(phi1(0, 0) == doctest::Approx(0.5 * (1 + e2)).epsilon(5e-4));
        CHECK(phi1(0, 1) == doctest::Approx(0.5 * (1 - e2)).epsilon(5e-4));

        const Eigen::MatrixXd phi10 = transition_matrix(schedule, 0.0, 10.0, 1e-3);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(std::abs(phi10(i, j) - 0.5) < 1e-6);
            }
        }
    }
    SUBCASE("doubly stochastic and nonnegative on a balanced schedule") {
        GraphSchedule schedule({{0.15, ring(9, 1)}, {0.15, ring(9, 2)}});
        for (double s : {0.0, 2.5, 7.5}) {
            for (double dt : {0.0, 1.0, 6.25, 12.5}) {
                const Eigen::MatrixXd phi = transition_matrix(schedule, s, s + dt, 1e-2);
                for (int i = 0; i < 9; ++i) {
                    CHECK(std::abs(phi.row(i).sum() - 1.0) < 1e-6);
                    CHECK(std::abs(phi.col(i).sum() - 1.0) < 1e-6);
                }
                CHECK(phi.minCoeff() >= -1e-9);
            }
        }
    }
    SUBCASE("deviation stays under the contraction bound") {
        GraphSchedule schedule({{0.15, ring(9, 1)}, {0.15, ring(9, 2)}});
        const ContractionConstants c = contraction_constants(schedule);
        for (auto [s, t] : {std::pair{0.0, 1.0}, {0.0, 5.0}, {3.0, 9.0}}) {
            const Eigen::MatrixXd phi = transition_matrix(schedule, s, t, 1e-2);
            const double dev = (phi.array() - 1.0 / 9.0).abs().maxCoeff();
            CHECK(dev <= c.H * std::pow(c.gamma, t - s) + 1e-9);
        }
    }
    SUBCASE("segment switching matches a manually assembled product") {
        GraphSchedule schedule({{0.15, ring(3, 1)}, {0.15, ring(3, 2)}});
        const double h = 1e-3;
        const Eigen::MatrixXd direct = transition_matrix(schedule, 0.0, 0.3, h);
        const Eigen::MatrixXd first = transition_matrix(schedule, 0.0, 0.15, h);
        const Eigen::MatrixXd second = transition_matrix(schedule, 0.15, 0.3, h);
        CHECK((second * first - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("schedule walker tracks segments from any start time") {
    GraphSchedule schedule({{0.15, ring(4, 1)}, {0.15, ring(4, 2)}});
    SUBCASE("mid-segment start") {
        ScheduleWalker walker(schedule, 0.2);
        CHECK(walker.segment_index() == 1);
        CHECK(walker.segment_end() == doctest::Approx(0.3));
        walker.advance();
        CHECK(walker.segment_index() == 0);
        CHECK(walker.segment_end() == doctest::Approx(0.45));
    }
    SUBCASE("start far into the schedule") {
        ScheduleWalker walker(schedule, 300.0);
        CHECK(walker.segment_end() > 300.0);
        CHECK(walker.segment_end() <= 300.0 + 0.15 + 1e-9);
    }
    SUBCASE("start exactly at a boundary belongs to the new segment") {
        ScheduleWalker walker(schedule, 0.15);
        CHECK(walker.segment_index() == 1);
    }
}
