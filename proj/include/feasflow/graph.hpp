#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <utility>
#include <vector>

#include "feasflow/errors.hpp"

namespace feasflow {

/// Directed edge from -> to (agent indices, 0-based).
struct Edge {
    int from = 0;
    int to = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Weighted digraph on n agents. weight(i, j) is the weight agent i places
/// on information received from agent j, i.e. weight(i, j) > 0 iff the edge
/// j -> i exists. Diagonal entries are zero, all weights nonnegative.
/// Immutable after construction.
class WeightedDigraph {
  public:
    /// Graph with no edges.
    explicit WeightedDigraph(int n);

    /// Construct from a full weight matrix; validates shape, nonnegativity
    /// and zero diagonal.
    explicit WeightedDigraph(Eigen::MatrixXd weights);

    /// Build from an edge list: each (from, to, w) sets weight(to, from) = w.
    static WeightedDigraph from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges);

    int agent_count() const { return static_cast<int>(weights_.rows()); }
    double weight(int i, int j) const { return weights_(i, j); }
    const Eigen::MatrixXd& weights() const { return weights_; }

    /// Sum of weights into agent i (row sum).
    double in_weight(int i) const { return weights_.row(i).sum(); }
    /// Sum of weights out of agent i (column sum).
    double out_weight(int i) const { return weights_.col(i).sum(); }

    std::vector<Edge> edges() const;

    friend bool operator==(const WeightedDigraph& a, const WeightedDigraph& b) {
        return a.weights_ == b.weights_;
    }

  private:
    Eigen::MatrixXd weights_;
};

/// L with l_ii = sum_j a_ij and l_ij = -a_ij; every row sums to zero.
Eigen::MatrixXd laplacian(const WeightedDigraph& g);

/// One piece of a periodic piecewise-constant schedule.
struct ScheduleSegment {
    double duration = 0.0;
    WeightedDigraph graph{1};
};

/// Edges whose weight integral over one period is positive, together with
/// the smallest such integral (delta) and the window length (the period).
struct DeltaGraph {
    std::vector<Edge> edges;
    double delta = 0.0;
    double T = 0.0;
};

/// Constants of the geometric contraction estimate for a switching
/// balanced digraph with strongly connected delta-graph:
///   lambda = 1 - 1/(8 n^2)^floor(n/2),   H = 1/lambda,
///   gamma  = lambda^(1 / ((floor(1/delta)+1) * floor(n/2) * T)).
struct ContractionConstants {
    double lambda = 0.0;
    double gamma = 0.0;
    double H = 0.0;
    double delta = 0.0;
    double T = 0.0;
    int n = 0;
};

/// Periodic piecewise-constant sequence of weighted digraphs, all on the
/// same agent set. Right-continuous: at a switch instant the new segment's
/// graph applies. Immutable after construction.
class GraphSchedule {
  public:
    explicit GraphSchedule(std::vector<ScheduleSegment> segments);

    int agent_count() const { return segments_.front().graph.agent_count(); }
    double period() const { return period_; }
    const std::vector<ScheduleSegment>& segments() const { return segments_; }
    double min_segment_duration() const;

    /// Segment index active at time t >= 0 (periodic, right-continuous).
    int segment_index_at(double t) const;

    /// End times of each segment within the first period (cumulative sums).
    const std::vector<double>& segment_ends() const { return cumulative_ends_; }

    friend bool operator==(const GraphSchedule& a, const GraphSchedule& b);

  private:
    std::vector<ScheduleSegment> segments_;
    std::vector<double> cumulative_ends_;
    double period_ = 0.0;
};

/// Graph active at time t (t >= 0); right-continuous and periodic.
const WeightedDigraph& adjacency_at(const GraphSchedule& schedule, double t);

/// True iff every segment graph has |in_weight(i) - out_weight(i)| <= tol
/// for every agent i.
bool is_balanced(const GraphSchedule& schedule, double tol);

/// Edges with positive weight integral over one period; delta is the
/// minimum integral over included edges, T the period. For a periodic
/// schedule the integral over [t, t+T] is independent of t, so the
/// persistent-edge condition holds exactly for every window.
DeltaGraph delta_graph(const GraphSchedule& schedule);

/// True iff the digraph has a single strongly connected component
/// containing all n nodes.
bool is_strongly_connected(const std::vector<Edge>& edges, int n);

/// Contraction constants from agent count and the schedule's delta-graph.
/// Throws NotBalanced / NotConnected if the assumptions fail, and
/// DegenerateNetwork for n = 1 (floor(n/2) = 0 leaves lambda undefined).
ContractionConstants contraction_constants(const GraphSchedule& schedule);

/// Same constants from raw (n, delta, T); used for recomputation checks.
ContractionConstants contraction_constants_from(int n, double delta, double T);

/// State-transition matrix of y' = -L(t) y from time s to time t >= s,
/// integrated by forward Euler with step h, subdivided so that every
/// switch instant is a step boundary. Rows sum to one up to roundoff.
Eigen::MatrixXd transition_matrix(const GraphSchedule& schedule, double s, double t, double h);

/// Walks a schedule forward from a start time, tracking the active segment
/// and the next switch instant without re-deriving them from t (robust at
/// switch boundaries). Used by the integrators.
class ScheduleWalker {
  public:
    ScheduleWalker(const GraphSchedule& schedule, double start);

    const WeightedDigraph& graph() const;
    int segment_index() const { return segment_index_; }
    /// Absolute time at which the current segment ends.
    double segment_end() const;
    /// Move to the next segment; call when integration reached segment_end.
    void advance();

  private:
    const GraphSchedule* schedule_;
    long period_index_ = 0;
    int segment_index_ = 0;
};

}  // namespace feasflow
