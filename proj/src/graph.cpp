#include "feasflow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stack>

namespace feasflow {

WeightedDigraph::WeightedDigraph(int n) {
    if (n < 1) {
        throw Error("WeightedDigraph: agent count must be >= 1");
    }
    weights_ = Eigen::MatrixXd::Zero(n, n);
}

WeightedDigraph::WeightedDigraph(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
    if (weights_.rows() < 1 || weights_.rows() != weights_.cols()) {
        throw Error("WeightedDigraph: weight matrix must be square, n >= 1");
    }
    for (int i = 0; i < weights_.rows(); ++i) {
        if (weights_(i, i) != 0.0) {
            throw Error("WeightedDigraph: diagonal entries must be zero");
        }
        for (int j = 0; j < weights_.cols(); ++j) {
            if (!(weights_(i, j) >= 0.0)) {
                throw Error("WeightedDigraph: weights must be nonnegative");
            }
        }
    }
}

WeightedDigraph WeightedDigraph::from_edges(int n,
                                            const std::vector<std::tuple<int, int, double>>& edges) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [from, to, weight] : edges) {
        if (from < 0 || from >= n || to < 0 || to >= n) {
            throw Error("WeightedDigraph: edge endpoint out of range");
        }
        if (from == to) {
            throw Error("WeightedDigraph: self-loops are not allowed");
        }
        w(to, from) = weight;
    }
    return WeightedDigraph(std::move(w));
}

std::vector<Edge> WeightedDigraph::edges() const {
    std::vector<Edge> out;
    const int n = agent_count();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (weights_(i, j) > 0.0) {
                out.push_back({j, i});
            }
        }
    }
    return out;
}

Eigen::MatrixXd laplacian(const WeightedDigraph& g) {
    const int n = g.agent_count();
    Eigen::MatrixXd lap = -g.weights();
    // Sequential accumulation; negating the same sum is exact, so the row
    // sums cancel to zero exactly when checked in index order.
    for (int i = 0; i < n; ++i) {
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                total += g.weights()(i, j);
            }
        }
        lap(i, i) = total;
    }
    return lap;
}

GraphSchedule::GraphSchedule(std::vector<ScheduleSegment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) {
        throw Error("GraphSchedule: needs at least one segment");
    }
    const int n = segments_.front().graph.agent_count();
    double acc = 0.0;
    for (const auto& seg : segments_) {
        if (!(seg.duration > 0.0)) {
            throw Error("GraphSchedule: segment durations must be positive");
        }
        if (seg.graph.agent_count() != n) {
            throw Error("GraphSchedule: all segment graphs must share the agent count");
        }
        acc += seg.duration;
        cumulative_ends_.push_back(acc);
    }
    period_ = acc;
}

double GraphSchedule::min_segment_duration() const {
    double m = segments_.front().duration;
    for (const auto& seg : segments_) {
        m = std::min(m, seg.duration);
    }
    return m;
}

int GraphSchedule::segment_index_at(double t) const {
    if (t < 0.0) {
        throw Error("GraphSchedule: time must be nonnegative");
    }
    double tau = std::fmod(t, period_);
    for (int k = 0; k < static_cast<int>(cumulative_ends_.size()); ++k) {
        if (tau < cumulative_ends_[k]) {
            return k;
        }
    }
    return 0;  // tau == period (roundoff): wrap to the first segment
}

bool operator==(const GraphSchedule& a, const GraphSchedule& b) {
    if (a.segments_.size() != b.segments_.size()) {
        return false;
    }
    for (std::size_t k = 0; k < a.segments_.size(); ++k) {
        if (a.segments_[k].duration != b.segments_[k].duration ||
            !(a.segments_[k].graph == b.segments_[k].graph)) {
            return false;
        }
    }
    return true;
}

const WeightedDigraph& adjacency_at(const GraphSchedule& schedule, double t) {
    return schedule.segments()[schedule.segment_index_at(t)].graph;
}

bool is_balanced(const GraphSchedule& schedule, double tol) {
    if (tol < 0.0) {
        throw Error("is_balanced: tolerance must be nonnegative");
    }
    for (const auto& seg : schedule.segments()) {
        for (int i = 0; i < seg.graph.agent_count(); ++i) {
            if (std::abs(seg.graph.in_weight(i) - seg.graph.out_weight(i)) > tol) {
                return false;
            }
        }
    }
    return true;
}

DeltaGraph delta_graph(const GraphSchedule& schedule) {
    const int n = schedule.agent_count();
    DeltaGraph result;
    result.T = schedule.period();
    result.delta = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            double integral = 0.0;
            for (const auto& seg : schedule.segments()) {
                integral += seg.duration * seg.graph.weight(i, j);
            }
            if (integral > 0.0) {
                result.edges.push_back({j, i});
                result.delta = (result.delta == 0.0) ? integral : std::min(result.delta, integral);
            }
        }
    }
    return result;
}

bool is_strongly_connected(const std::vector<Edge>& edges, int n) {
    if (n <= 0) {
        return false;
    }
    std::vector<std::vector<int>> adj(n), radj(n);
    for (const auto& e : edges) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
            throw Error("is_strongly_connected: edge endpoint out of range");
        }
        adj[e.from].push_back(e.to);
        radj[e.to].push_back(e.from);
    }
    // Kosaraju: one forward pass from node 0, one backward pass. All nodes
    // reachable both ways from a common node <=> single SCC.
    auto reaches_all = [n](const std::vector<std::vector<int>>& g) {
        std::vector<char> seen(n, 0);
        std::stack<int> stack;
        stack.push(0);
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.top();
            stack.pop();
            for (int w : g[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push(w);
                }
            }
        }
        return count == n;
    };
    return reaches_all(adj) && reaches_all(radj);
}

ContractionConstants contraction_constants_from(int n, double delta, double T) {
    if (n < 2) {
        throw DegenerateNetwork("contraction constants are undefined for n < 2");
    }
    if (!(delta > 0.0) || !(T > 0.0)) {
        throw Error("contraction_constants: delta and T must be positive");
    }
    ContractionConstants c;
    c.n = n;
    c.delta = delta;
    c.T = T;
    const double half = std::floor(n / 2.0);
    c.lambda = 1.0 - 1.0 / std::pow(8.0 * n * n, half);
    c.H = 1.0 / c.lambda;
    const double intervals = std::floor(1.0 / delta) + 1.0;
    c.gamma = std::pow(c.lambda, 1.0 / (intervals * half * T));
    return c;
}

ContractionConstants contraction_constants(const GraphSchedule& schedule) {
    if (schedule.agent_count() < 2) {
        throw DegenerateNetwork("contraction constants are undefined for n < 2");
    }
    if (!is_balanced(schedule, 1e-9)) {
        throw NotBalanced("schedule is not balanced");
    }
    const DeltaGraph dg = delta_graph(schedule);
    if (!is_strongly_connected(dg.edges, schedule.agent_count())) {
        throw NotConnected("delta-graph is not strongly connected");
    }
    return contraction_constants_from(schedule.agent_count(), dg.delta, dg.T);
}

ScheduleWalker::ScheduleWalker(const GraphSchedule& schedule, double start) : schedule_(&schedule) {
    if (start < 0.0) {
        throw Error("ScheduleWalker: start time must be nonnegative");
    }
    const double period = schedule.period();
    period_index_ = static_cast<long>(std::floor(start / period));
    if (static_cast<double>(period_index_) * period > start) {
        --period_index_;  // floor(start/period) rounded up across a boundary
    }
    const double local = start - static_cast<double>(period_index_) * period;
    segment_index_ = 0;
    const auto& ends = schedule.segment_ends();
    while (segment_index_ < static_cast<int>(ends.size()) && local >= ends[segment_index_]) {
        ++segment_index_;
    }
    if (segment_index_ == static_cast<int>(ends.size())) {
        segment_index_ = 0;
        ++period_index_;
    }
    while (segment_end() <= start) {
        advance();
    }
}

const WeightedDigraph& ScheduleWalker::graph() const {
    return schedule_->segments()[segment_index_].graph;
}

double ScheduleWalker::segment_end() const {
    return static_cast<double>(period_index_) * schedule_->period() +
           schedule_->segment_ends()[segment_index_];
}

void ScheduleWalker::advance() {
    ++segment_index_;
    if (segment_index_ == static_cast<int>(schedule_->segments().size())) {
        segment_index_ = 0;
        ++period_index_;
    }
}

Eigen::MatrixXd transition_matrix(const GraphSchedule& schedule, double s, double t, double h) {
    if (!(h > 0.0)) {
        throw Error("transition_matrix: step must be positive");
    }
    if (s < 0.0 || t < s) {
        throw Error("transition_matrix: need t >= s >= 0");
    }
    const int n = schedule.agent_count();
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n);
    if (t == s) {
        return phi;
    }
    ScheduleWalker walker(schedule, s);
    Eigen::MatrixXd lap = laplacian(walker.graph());
    double tau = s;
    // Step targets are anchored to the segment start; within a snap-width
    // of a boundary they land exactly on it.
    double anchor = tau;
    long steps_in_segment = 0;
    const double snap = h * 1e-9;
    while (tau < t) {
        const double seg_end = walker.segment_end();
        double target = anchor + static_cast<double>(steps_in_segment + 1) * h;
        if (target >= seg_end - snap) {
            target = seg_end;
        }
        if (target >= t - snap) {
            target = t;
        }
        if (target > seg_end) {
            target = seg_end;
        }
        const double h_eff = target - tau;
        if (h_eff > 0.0) {
            phi -= h_eff * (lap * phi).eval();
        }
        tau = target;
        if (tau >= seg_end) {
            if (tau < t) {
                walker.advance();
                lap = laplacian(walker.graph());
            }
            anchor = tau;
            steps_in_segment = 0;
        } else {
            ++steps_in_segment;
        }
    }
    return phi;
}

}  // namespace feasflow
