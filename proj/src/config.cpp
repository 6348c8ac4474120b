#include "feasflow/config.hpp"

#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace feasflow {

namespace {

using nlohmann::json;

/// Collects semantic violations while walking the document so that a load
/// reports everything wrong at once, not just the first finding.
struct IssueList {
    std::vector<std::string> issues;

    void add(const std::string& path, const std::string& what) { issues.push_back(path + ": " + what); }
    bool ok() const { return issues.empty(); }
};

bool require(const json& node, const std::string& path, const char* key, json::value_t type,
             IssueList& issues) {
    if (!node.contains(key)) {
        issues.add(path + "." + key, "missing");
        return false;
    }
    const auto& v = node.at(key);
    const bool numeric_wanted = type == json::value_t::number_float;
    if (numeric_wanted ? !v.is_number() : v.type() != type) {
        issues.add(path + "." + key, "wrong type");
        return false;
    }
    return true;
}

bool get_number(const json& node, const std::string& path, const char* key, double& out,
                IssueList& issues) {
    if (!require(node, path, key, json::value_t::number_float, issues)) {
        return false;
    }
    out = node.at(key).get<double>();
    return true;
}

std::optional<Eigen::VectorXd> read_vector(const json& node, const std::string& path,
                                           IssueList& issues) {
    if (!node.is_array() || node.empty()) {
        issues.add(path, "expected a nonempty array of numbers");
        return std::nullopt;
    }
    Eigen::VectorXd v(node.size());
    for (std::size_t k = 0; k < node.size(); ++k) {
        if (!node[k].is_number()) {
            issues.add(path + "[" + std::to_string(k) + "]", "expected a number");
            return std::nullopt;
        }
        v(static_cast<Eigen::Index>(k)) = node[k].get<double>();
    }
    return v;
}

std::optional<ConvexScalarFunction> read_function(const json& node, const std::string& path,
                                                  IssueList& issues) {
    if (!node.is_object() || !node.contains("type") || !node.at("type").is_string()) {
        issues.add(path, "expected an object with a \"type\" string");
        return std::nullopt;
    }
    const std::string type = node.at("type").get<std::string>();
    try {
        if (type == "affine") {
            auto c = read_vector(node.value("c", json::array()), path + ".c", issues);
            double d = 0.0;
            if (!get_number(node, path, "d", d, issues) || !c) {
                return std::nullopt;
            }
            return ConvexScalarFunction(Affine{*c, d});
        }
        if (type == "convex_quadratic") {
            if (!node.contains("Q") || !node.at("Q").is_array()) {
                issues.add(path + ".Q", "expected an array of rows");
                return std::nullopt;
            }
            const auto& rows = node.at("Q");
            Eigen::MatrixXd q(rows.size(), rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                auto row = read_vector(rows[r], path + ".Q[" + std::to_string(r) + "]", issues);
                if (!row || row->size() != q.cols()) {
                    issues.add(path + ".Q", "must be square");
                    return std::nullopt;
                }
                q.row(static_cast<Eigen::Index>(r)) = row->transpose();
            }
            auto c = read_vector(node.value("c", json::array()), path + ".c", issues);
            double d = 0.0;
            if (!get_number(node, path, "d", d, issues) || !c) {
                return std::nullopt;
            }
            return ConvexScalarFunction(ConvexQuadratic{q, *c, d});
        }
        if (type == "huber_quadratic") {
            double w = 0.0, r = 0.0;
            if (!get_number(node, path, "weight", w, issues) ||
                !get_number(node, path, "radius", r, issues)) {
                return std::nullopt;
            }
            return ConvexScalarFunction(HuberQuadratic{w, r});
        }
        if (type == "max_of_affine") {
            if (!node.contains("pieces") || !node.at("pieces").is_array() ||
                node.at("pieces").empty()) {
                issues.add(path + ".pieces", "expected a nonempty array");
                return std::nullopt;
            }
            MaxOfAffine f;
            for (std::size_t k = 0; k < node.at("pieces").size(); ++k) {
                const auto& piece = node.at("pieces")[k];
                const std::string ppath = path + ".pieces[" + std::to_string(k) + "]";
                auto c = read_vector(piece.value("c", json::array()), ppath + ".c", issues);
                double d = 0.0;
                if (!get_number(piece, ppath, "d", d, issues) || !c) {
                    return std::nullopt;
                }
                f.pieces.push_back(Affine{*c, d});
            }
            return ConvexScalarFunction(std::move(f));
        }
        issues.add(path + ".type", "unknown function type \"" + type + "\"");
        return std::nullopt;
    } catch (const Error& e) {
        issues.add(path, e.what());
        return std::nullopt;
    }
}

std::optional<GraphSchedule> read_schedule(const json& doc, IssueList& issues) {
    if (!doc.contains("schedule") || !doc.at("schedule").is_object()) {
        issues.add("schedule", "missing");
        return std::nullopt;
    }
    const auto& sched = doc.at("schedule");
    if (!sched.contains("agents") || !sched.at("agents").is_number_integer() ||
        sched.at("agents").get<int>() < 1) {
        issues.add("schedule.agents", "expected a positive integer");
        return std::nullopt;
    }
    const int n = sched.at("agents").get<int>();
    if (!sched.contains("segments") || !sched.at("segments").is_array() ||
        sched.at("segments").empty()) {
        issues.add("schedule.segments", "expected a nonempty array");
        return std::nullopt;
    }
    std::vector<ScheduleSegment> segments;
    bool usable = true;
    for (std::size_t s = 0; s < sched.at("segments").size(); ++s) {
        const auto& seg = sched.at("segments")[s];
        const std::string spath = "schedule.segments[" + std::to_string(s) + "]";
        double duration = 0.0;
        if (!get_number(seg, spath, "duration", duration, issues) || !(duration > 0.0)) {
            issues.add(spath + ".duration", "must be positive");
            usable = false;
            continue;
        }
        std::vector<std::tuple<int, int, double>> edges;
        if (seg.contains("edges")) {
            if (!seg.at("edges").is_array()) {
                issues.add(spath + ".edges", "expected an array");
                usable = false;
                continue;
            }
            for (std::size_t e = 0; e < seg.at("edges").size(); ++e) {
                const auto& edge = seg.at("edges")[e];
                const std::string epath = spath + ".edges[" + std::to_string(e) + "]";
                int from = edge.value("from", 0);
                int to = edge.value("to", 0);
                double weight = edge.value("weight", 1.0);
                bool edge_ok = true;
                if (from < 1 || from > n) {
                    issues.add(epath + ".from", "agent index " + std::to_string(from) +
                                                    " outside [1, " + std::to_string(n) + "]");
                    edge_ok = false;
                }
                if (to < 1 || to > n) {
                    issues.add(epath + ".to", "agent index " + std::to_string(to) + " outside [1, " +
                                                  std::to_string(n) + "]");
                    edge_ok = false;
                }
                if (from == to) {
                    issues.add(epath, "self-loops are not allowed");
                    edge_ok = false;
                }
                if (!(weight >= 0.0)) {
                    issues.add(epath + ".weight", "must be nonnegative");
                    edge_ok = false;
                }
                if (edge_ok) {
                    edges.emplace_back(from - 1, to - 1, weight);
                } else {
                    usable = false;
                }
            }
        }
        if (usable) {
            segments.push_back({duration, WeightedDigraph::from_edges(n, edges)});
        }
    }
    if (!usable || !issues.ok()) {
        return std::nullopt;
    }
    return GraphSchedule(std::move(segments));
}

std::optional<StepSizeSchedule> read_gain(const json& doc, IssueList& issues) {
    if (!doc.contains("gain") || !doc.at("gain").is_object()) {
        issues.add("gain", "missing");
        return std::nullopt;
    }
    const auto& gain = doc.at("gain");
    const std::string family = gain.value("family", "");
    try {
        if (family == "harmonic") {
            double a0 = 0.0, b0 = 0.0;
            if (!get_number(gain, "gain", "a0", a0, issues) ||
                !get_number(gain, "gain", "b0", b0, issues)) {
                return std::nullopt;
            }
            return StepSizeSchedule(Harmonic{a0, b0});
        }
        if (family == "generalized_harmonic") {
            double a0 = 0.0, b0 = 0.0, scale = 0.0;
            if (!get_number(gain, "gain", "a0", a0, issues) ||
                !get_number(gain, "gain", "b0", b0, issues) ||
                !get_number(gain, "gain", "scale", scale, issues)) {
                return std::nullopt;
            }
            return StepSizeSchedule(GeneralizedHarmonic{a0, b0, scale});
        }
        if (family == "constant") {
            double c = 0.0;
            if (!get_number(gain, "gain", "value", c, issues)) {
                return std::nullopt;
            }
            return StepSizeSchedule(Constant{c});
        }
    } catch (const Error& e) {
        issues.add("gain", e.what());
        return std::nullopt;
    }
    issues.add("gain.family", "expected harmonic | generalized_harmonic | constant");
    return std::nullopt;
}

std::optional<std::vector<ConvexScalarFunction>> read_function_list(const json& problem,
                                                                    const char* key, int n,
                                                                    IssueList& issues) {
    const std::string path = std::string("problem.") + key;
    if (!problem.contains(key) || !problem.at(key).is_array()) {
        issues.add(path, "missing");
        return std::nullopt;
    }
    const auto& arr = problem.at(key);
    if (static_cast<int>(arr.size()) != n) {
        issues.add(path, "expected one entry per agent (" + std::to_string(n) + ")");
        return std::nullopt;
    }
    std::vector<ConvexScalarFunction> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        auto f = read_function(arr[k], path + "[" + std::to_string(k) + "]", issues);
        if (!f) {
            return std::nullopt;
        }
        out.push_back(std::move(*f));
    }
    return out;
}

json function_to_json(const ConvexScalarFunction& f) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Affine>) {
                return {{"type", "affine"},
                        {"c", std::vector<double>(v.c.begin(), v.c.end())},
                        {"d", v.d}};
            } else if constexpr (std::is_same_v<T, ConvexQuadratic>) {
                std::vector<std::vector<double>> rows;
                for (Eigen::Index r = 0; r < v.Q.rows(); ++r) {
                    rows.emplace_back(v.Q.row(r).begin(), v.Q.row(r).end());
                }
                return {{"type", "convex_quadratic"},
                        {"Q", rows},
                        {"c", std::vector<double>(v.c.begin(), v.c.end())},
                        {"d", v.d}};
            } else if constexpr (std::is_same_v<T, HuberQuadratic>) {
                return {{"type", "huber_quadratic"}, {"weight", v.weight}, {"radius", v.radius}};
            } else {
                static_assert(std::is_same_v<T, MaxOfAffine>);
                json pieces = json::array();
                for (const auto& piece : v.pieces) {
                    pieces.push_back(
                        {{"c", std::vector<double>(piece.c.begin(), piece.c.end())}, {"d", piece.d}});
                }
                return {{"type", "max_of_affine"}, {"pieces", pieces}};
            }
        },
        f.variant());
}

ExperimentConfig build_config(const json& doc) {
    IssueList issues;

    auto schedule = read_schedule(doc, issues);
    auto gain = read_gain(doc, issues);

    std::optional<Problem> problem;
    int dimension = 0;
    std::string mode;
    if (!doc.contains("problem") || !doc.at("problem").is_object()) {
        issues.add("problem", "missing");
    } else if (schedule) {
        const auto& prob = doc.at("problem");
        const int n = schedule->agent_count();
        mode = prob.value("mode", "");
        if (!prob.contains("dimension") || !prob.at("dimension").is_number_integer() ||
            prob.at("dimension").get<int>() < 1) {
            issues.add("problem.dimension", "expected a positive integer");
        } else {
            dimension = prob.at("dimension").get<int>();
        }
        try {
            if (mode == "consensus-only") {
                for (const char* key : {"constraints", "costs", "multiplier_caps"}) {
                    if (prob.contains(key)) {
                        issues.add(std::string("problem.") + key,
                                   "not allowed in consensus-only mode");
                    }
                }
                if (dimension >= 1) {
                    problem = ConsensusOnlyProblem{dimension};
                }
            } else if (mode == "feasibility") {
                if (prob.contains("costs") || prob.contains("multiplier_caps")) {
                    issues.add("problem", "costs/multiplier_caps are optimization-only");
                }
                auto constraints = read_function_list(prob, "constraints", n, issues);
                if (constraints && dimension >= 1) {
                    problem = FeasibilityProblem(dimension, std::move(*constraints));
                }
            } else if (mode == "optimization") {
                auto costs = read_function_list(prob, "costs", n, issues);
                auto constraints = read_function_list(prob, "constraints", n, issues);
                std::optional<Eigen::VectorXd> caps;
                if (!prob.contains("multiplier_caps")) {
                    issues.add("problem.multiplier_caps", "missing");
                } else {
                    caps = read_vector(prob.at("multiplier_caps"), "problem.multiplier_caps", issues);
                    if (caps && caps->size() != n) {
                        issues.add("problem.multiplier_caps",
                                   "expected one cap per agent (" + std::to_string(n) + ")");
                        caps.reset();
                    }
                }
                if (costs && constraints && caps && dimension >= 1) {
                    problem = ConstrainedOptProblem(dimension, std::move(*costs),
                                                    std::move(*constraints), std::move(*caps));
                }
            } else {
                issues.add("problem.mode", "expected feasibility | optimization | consensus-only");
            }
        } catch (const Error& e) {
            issues.add("problem", e.what());
        }
    }

    // Shortest declared duration, usable even when the schedule as a whole
    // failed to build, so sim.step problems still get reported.
    std::optional<double> min_duration;
    if (doc.contains("schedule") && doc.at("schedule").is_object() &&
        doc.at("schedule").contains("segments") && doc.at("schedule").at("segments").is_array()) {
        for (const auto& seg : doc.at("schedule").at("segments")) {
            if (seg.is_object() && seg.contains("duration") && seg.at("duration").is_number()) {
                const double d = seg.at("duration").get<double>();
                if (d > 0.0) {
                    min_duration = min_duration ? std::min(*min_duration, d) : d;
                }
            }
        }
    }

    SimConfig sim;
    std::optional<StateMatrix> x0;
    std::optional<Eigen::VectorXd> z0;
    if (!doc.contains("sim") || !doc.at("sim").is_object()) {
        issues.add("sim", "missing");
    } else {
        const auto& s = doc.at("sim");
        double step = 0.0, t_end = 0.0;
        if (get_number(s, "sim", "step", step, issues)) {
            if (!(step > 0.0)) {
                issues.add("sim.step", "must be positive");
            } else {
                sim.h = step;
                if (min_duration && step > *min_duration) {
                    issues.add("sim.step", "exceeds the shortest segment duration");
                }
            }
        }
        if (get_number(s, "sim", "t_end", t_end, issues)) {
            if (t_end < 0.0) {
                issues.add("sim.t_end", "must be nonnegative");
            } else {
                sim.t_end = t_end;
            }
        }
        if (!s.contains("record_stride") || !s.at("record_stride").is_number_integer() ||
            s.at("record_stride").get<int>() < 1) {
            issues.add("sim.record_stride", "expected a positive integer");
        } else {
            sim.record_stride = s.at("record_stride").get<int>();
        }
        if (!s.contains("initial_states") || !s.at("initial_states").is_array() ||
            s.at("initial_states").empty()) {
            issues.add("sim.initial_states", "expected one row per agent");
        } else if (schedule && dimension >= 1) {
            const auto& rows = s.at("initial_states");
            if (static_cast<int>(rows.size()) != schedule->agent_count()) {
                issues.add("sim.initial_states",
                           "expected " + std::to_string(schedule->agent_count()) + " rows");
            } else {
                StateMatrix x(schedule->agent_count(), dimension);
                bool rows_ok = true;
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    auto row = read_vector(rows[r], "sim.initial_states[" + std::to_string(r) + "]",
                                           issues);
                    if (!row || row->size() != dimension) {
                        issues.add("sim.initial_states[" + std::to_string(r) + "]",
                                   "expected " + std::to_string(dimension) + " coordinates");
                        rows_ok = false;
                        break;
                    }
                    x.row(static_cast<Eigen::Index>(r)) = row->transpose();
                }
                if (rows_ok) {
                    x0 = std::move(x);
                }
            }
        }
        if (s.contains("initial_multipliers")) {
            if (mode != "optimization") {
                issues.add("sim.initial_multipliers", "only valid in optimization mode");
            } else {
                z0 = read_vector(s.at("initial_multipliers"), "sim.initial_multipliers", issues);
                if (z0 && schedule && z0->size() != schedule->agent_count()) {
                    issues.add("sim.initial_multipliers", "expected one entry per agent");
                    z0.reset();
                }
            }
        }
    }

    if (gain && !mode.empty() && mode != "consensus-only" && !gain->validate().admissible()) {
        issues.add("gain", "violates the admissibility conditions; only consensus-only mode "
                           "accepts constant gains");
    }

    if (!issues.ok() || !schedule || !problem || !gain || !x0) {
        if (issues.ok()) {
            issues.add("config", "incomplete");
        }
        throw ValidationError(std::move(issues.issues));
    }

    return ExperimentConfig{doc.value("name", ""),
                            doc.value("description", ""),
                            std::move(*schedule),
                            std::move(*problem),
                            std::move(*gain),
                            sim,
                            std::move(*x0),
                            std::move(z0),
                            doc.value("output", "")};
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("config root must be a JSON object");
    }
    return build_config(doc);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& config) {
    json doc;
    if (!config.name.empty()) {
        doc["name"] = config.name;
    }
    if (!config.description.empty()) {
        doc["description"] = config.description;
    }

    json segments = json::array();
    for (const auto& seg : config.schedule.segments()) {
        json edges = json::array();
        const auto& g = seg.graph;
        for (int i = 0; i < g.agent_count(); ++i) {
            for (int j = 0; j < g.agent_count(); ++j) {
                if (g.weight(i, j) > 0.0) {
                    edges.push_back({{"from", j + 1}, {"to", i + 1}, {"weight", g.weight(i, j)}});
                }
            }
        }
        segments.push_back({{"duration", seg.duration}, {"edges", edges}});
    }
    doc["schedule"] = {{"agents", config.schedule.agent_count()}, {"segments", segments}};

    json problem;
    problem["dimension"] = dimension_of(config.problem);
    std::visit(
        [&problem](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConsensusOnlyProblem>) {
                problem["mode"] = "consensus-only";
            } else if constexpr (std::is_same_v<T, FeasibilityProblem>) {
                problem["mode"] = "feasibility";
                json constraints = json::array();
                for (const auto& f : p.constraints()) {
                    constraints.push_back(function_to_json(f));
                }
                problem["constraints"] = constraints;
            } else {
                problem["mode"] = "optimization";
                json costs = json::array(), constraints = json::array();
                for (const auto& f : p.costs()) {
                    costs.push_back(function_to_json(f));
                }
                for (const auto& f : p.constraints()) {
                    constraints.push_back(function_to_json(f));
                }
                problem["costs"] = costs;
                problem["constraints"] = constraints;
                problem["multiplier_caps"] = std::vector<double>(p.multiplier_caps().begin(),
                                                                 p.multiplier_caps().end());
            }
        },
        config.problem);
    doc["problem"] = problem;

    doc["gain"] = std::visit(
        [](const auto& g) -> json {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, Harmonic>) {
                return {{"family", "harmonic"}, {"a0", g.a0}, {"b0", g.b0}};
            } else if constexpr (std::is_same_v<T, GeneralizedHarmonic>) {
                return {{"family", "generalized_harmonic"},
                        {"a0", g.a0},
                        {"b0", g.b0},
                        {"scale", g.scale}};
            } else {
                return {{"family", "constant"}, {"value", g.c}};
            }
        },
        config.gain.variant());

    json sim;
    sim["step"] = config.sim.h;
    sim["t_end"] = config.sim.t_end;
    sim["record_stride"] = config.sim.record_stride;
    json rows = json::array();
    for (Eigen::Index r = 0; r < config.initial_states.rows(); ++r) {
        rows.push_back(std::vector<double>(config.initial_states.row(r).begin(),
                                           config.initial_states.row(r).end()));
    }
    sim["initial_states"] = rows;
    if (config.initial_multipliers) {
        sim["initial_multipliers"] = std::vector<double>(config.initial_multipliers->begin(),
                                                         config.initial_multipliers->end());
    }
    doc["sim"] = sim;
    if (!config.output_path.empty()) {
        doc["output"] = config.output_path;
    }
    return doc.dump(2) + "\n";
}

void save_config(const ExperimentConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open for writing: " + path);
    }
    out << config_to_json(config);
}

bool configs_equivalent(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.schedule == b.schedule && problems_equal(a.problem, b.problem) && a.gain == b.gain &&
           a.sim.h == b.sim.h && a.sim.t_end == b.sim.t_end &&
           a.sim.record_stride == b.sim.record_stride && a.initial_states == b.initial_states &&
           a.initial_multipliers.has_value() == b.initial_multipliers.has_value() &&
           (!a.initial_multipliers || *a.initial_multipliers == *b.initial_multipliers) &&
           a.output_path == b.output_path;
}

}  // namespace feasflow
