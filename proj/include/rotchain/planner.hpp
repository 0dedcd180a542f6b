#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <thread>
#include <variant>
#include <vector>

#include "rotchain/equilibrium.hpp"
#include "rotchain/stability.hpp"
#include "rotchain/trajectory.hpp"
#include "rotchain/types.hpp"

namespace rotchain {

struct EmptyGraph : Error {
    EmptyGraph() : Error("no feasible vertex in the stability map") {}
};

struct NoPath : Error {
    NoPath() : Error("no feasible path to the goal") {}
};

/// Control-space envelope of the driving robot: axis ranges and rate limits.
struct RobotLimits {
    double r_min = 0.0, r_max = 0.25;        ///< [m]
    double omega_min = 0.5, omega_max = 25.0;  ///< [rad/s]
    double h_min = 0.1, h_max = 0.5;         ///< [m]
    double r_rate     = 0.1;                 ///< [m/s]
    double omega_rate = 2.0;                 ///< [rad/s^2]
    double h_rate     = 0.1;                 ///< [m/s]

    void validate() const {
        if (!(r_min <= r_max) || !(omega_min <= omega_max) || !(h_min <= h_max))
            throw InvalidArgument("robot limit ranges must be nonempty");
        if (!(r_rate > 0.0) || !(omega_rate > 0.0) || !(h_rate > 0.0))
            throw InvalidArgument("robot rate limits must be positive");
    }

    bool contains(const ControlInput& u) const {
        return u.r >= r_min && u.r <= r_max && u.omega >= omega_min && u.omega <= omega_max &&
               u.h >= h_min && u.h <= h_max;
    }

    /// Distance between two controls with each axis scaled by its span.
    double normalized_distance(const ControlInput& a, const ControlInput& b) const {
        const auto scaled = [](double d, double span) { return span > 0.0 ? d / span : 0.0; };
        const double dr = scaled(a.r - b.r, r_max - r_min);
        const double dw = scaled(a.omega - b.omega, omega_max - omega_min);
        const double dh = scaled(a.h - b.h, h_max - h_min);
        return std::sqrt(dr * dr + dw * dw + dh * dh);
    }
};

/// Whether the bottom-slope step window applies to every edge or only to
/// edges that actually change c.
enum class Condition1Scope { all, c_changing_only };

struct EdgeParams {
    double K_min = 0.1;          ///< lower bound of the |delta c| window
    double K_max = 0.5;          ///< upper bound
    double lambda_node = 0.0;    ///< vertex admission threshold
    double lambda_path = 1.0;    ///< along-edge stability bound
    int samples_per_edge = 10;   ///< M
    double max_edge_length = 0.45;  ///< normalized A-space pruning radius
    Condition1Scope condition1_scope = Condition1Scope::all;
    double rest_T_bar = 0.5;     ///< T_bar coordinate assigned to the REST vertex
    double goal_dwell = 5.0;     ///< seconds held at the goal node
};

struct GraphVertex {
    ParamPoint point;
    ControlInput control;
    int mode          = 0;
    double lambda_max = 0.0;
    bool is_rest      = false;
};

/// Validation record of one candidate edge.
struct EdgeRecord {
    int from = -1, to = -1;
    double K          = 0.0;
    double max_lambda = std::numeric_limits<double>::quiet_NaN();
    bool cond1 = false, cond2 = false, cond3 = false;
    bool feasible = false;
    double weight = 0.0;  ///< normalized control distance between endpoints
};

/// Graph over the stable, robot-feasible subspace. Vertex 0 is the virtual
/// REST vertex; only feasible edges are stored.
struct PlanGraph {
    std::vector<GraphVertex> vertices;
    std::vector<EdgeRecord> edges;
    std::vector<std::vector<int>> adjacency;  ///< edge indices per vertex
    RobotLimits limits;
    EdgeParams params;
    CubeBounds bounds;
};

/// Validate one candidate edge against the three feasibility conditions:
///   1. the bottom-slope step K = |c_i - c_j| lies inside (K_min, K_max);
///   2. at M points interpolated in parameter space, the equilibrium
///      (warm-started from the previous sample, tracking the physically
///      realized branch) has lambda_max <= lambda_path;
///   3. every sampled control lies inside the robot limits.
inline EdgeRecord check_edge(const GraphVertex& a, const GraphVertex& b,
                             const LumpedModelParams& model, const ChainParams& chain,
                             const RobotLimits& limits, const EdgeParams& params,
                             int steps = kDefaultIntegrationSteps,
                             const CubeBounds& bounds = {}) {
    EdgeRecord rec;
    rec.K      = std::abs(a.point.c - b.point.c);
    rec.weight = limits.normalized_distance(a.control, b.control);

    const bool c_changes = rec.K > 0.0;
    rec.cond1 = (params.condition1_scope == Condition1Scope::c_changing_only && !c_changes)
                    ? true
                    : (rec.K > params.K_min && rec.K < params.K_max);
    if (!rec.cond1) return rec;

    rec.cond2 = true;
    rec.cond3 = true;
    rec.max_lambda = -std::numeric_limits<double>::infinity();

    const int M = params.samples_per_edge;
    LumpedState warm;
    bool have_warm = false;
    for (int s = 1; s <= M; ++s) {
        const double t = double(s) / M;
        const ParamPoint q{a.point.L_bar + t * (b.point.L_bar - a.point.L_bar),
                           a.point.T_bar + t * (b.point.T_bar - a.point.T_bar),
                           a.point.c + t * (b.point.c - a.point.c)};
        Configuration cfg;
        try {
            cfg = forward_map(q, chain, steps, bounds);
        } catch (const Error&) {
            rec.cond2 = false;
            break;
        }
        if (!limits.contains(cfg.control)) {
            rec.cond3 = false;
            break;
        }
        try {
            LumpedState seed = discretize(cfg, model.links);
            if (have_warm) {
                warm.anchor_top = seed.anchor_top;
                seed            = warm;
            }
            const LumpedState eq = solve_equilibrium(seed, model, chain, cfg.omega);
            warm                 = eq;
            have_warm            = true;
            const double lam = lambda_max_of(analytic_jacobian(eq, model, chain, cfg.omega));
            rec.max_lambda   = std::max(rec.max_lambda, lam);
            if (lam > params.lambda_path) {
                rec.cond2 = false;
                break;
            }
        } catch (const Error&) {
            rec.cond2 = false;  // no equilibrium on the path
            break;
        }
    }
    rec.feasible = rec.cond1 && rec.cond2 && rec.cond3;
    return rec;
}

/// Build the feasibility graph from an evaluated stability map: admit the
/// stable in-limits grid points plus the virtual REST vertex, then validate
/// candidate edges (pairs within the pruning radius). Edge validation is
/// independent per pair and runs on `jobs` threads.
inline PlanGraph build_graph(const std::vector<StabilityRecord>& map, const RobotLimits& limits,
                             const EdgeParams& params, const LumpedModelParams& model,
                             const ChainParams& chain, int jobs = 1,
                             const CubeBounds& bounds = {}) {
    limits.validate();
    model.validate();
    chain.validate();

    PlanGraph graph;
    graph.limits = limits;
    graph.params = params;
    graph.bounds = bounds;

    GraphVertex rest;
    rest.point = {chain.length * limits.omega_min * limits.omega_min / chain.g_mag(),
                  params.rest_T_bar, 0.0};
    rest.control    = {0.0, limits.omega_min, chain.length};
    rest.mode       = 1;
    rest.lambda_max = 0.0;
    rest.is_rest    = true;
    graph.vertices.push_back(rest);

    for (const StabilityRecord& rec : map) {
        if (!rec.equilibrium_ok) continue;
        if (!(rec.lambda_max <= params.lambda_node)) continue;
        if (!limits.contains(rec.control)) continue;
        graph.vertices.push_back({rec.point, rec.control, rec.mode, rec.lambda_max, false});
    }
    if (graph.vertices.size() <= 1) throw EmptyGraph();

    const auto normalized_A_distance = [&](const ParamPoint& p, const ParamPoint& q) {
        const double dL = (p.L_bar - q.L_bar) / bounds.L_bar_max;
        const double dT = (p.T_bar - q.T_bar) / bounds.T_bar_max;
        const double dc = (p.c - q.c) / bounds.c_max;
        return std::sqrt(dL * dL + dT * dT + dc * dc);
    };

    // candidate pairs: cheap geometric and K-window pruning first
    std::vector<std::pair<int, int>> candidates;
    const int n = static_cast<int>(graph.vertices.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const GraphVertex& a = graph.vertices[i];
            const GraphVertex& b = graph.vertices[j];
            if (normalized_A_distance(a.point, b.point) > params.max_edge_length) continue;
            const double K = std::abs(a.point.c - b.point.c);
            const bool exempt =
                params.condition1_scope == Condition1Scope::c_changing_only && K == 0.0;
            if (!exempt && !(K > params.K_min && K < params.K_max)) continue;
            candidates.emplace_back(i, j);
        }
    }

    std::vector<EdgeRecord> records(candidates.size());
    const auto evaluate = [&](std::size_t idx) {
        const auto [i, j] = candidates[idx];
        EdgeRecord rec = check_edge(graph.vertices[i], graph.vertices[j], model, chain, limits,
                                    params, kDefaultIntegrationSteps, bounds);
        rec.from       = i;
        rec.to         = j;
        records[idx]   = rec;
    };
    if (jobs <= 1) {
        for (std::size_t idx = 0; idx < candidates.size(); ++idx) evaluate(idx);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t idx = next.fetch_add(1); idx < candidates.size();
                     idx = next.fetch_add(1))
                    evaluate(idx);
            });
        }
        for (auto& t : workers) t.join();
    }

    graph.adjacency.assign(graph.vertices.size(), {});
    for (const EdgeRecord& rec : records) {
        if (!rec.feasible) continue;
        const int id = static_cast<int>(graph.edges.size());
        graph.edges.push_back(rec);
        graph.adjacency[rec.from].push_back(id);
        graph.adjacency[rec.to].push_back(id);
    }
    return graph;
}

// ---------------------------------------------------------------------------
// Shortest-path planning
// ---------------------------------------------------------------------------

struct PlanNode {
    ParamPoint point;
    ControlInput control;
    int mode     = 0;
    double dwell = 0.0;  ///< seconds held at this node after arrival
};

struct Plan {
    std::vector<PlanNode> nodes;
    std::vector<EdgeRecord> edges;  ///< validation record per consecutive pair
};

/// A goal is either a rotation mode or a parameter-space point (the nearest
/// vertex is used).
using PlanGoal = std::variant<int, ParamPoint>;

/// Uniform-cost search by cumulative normalized control distance from the
/// start vertex to any vertex matching the goal.
inline Plan plan(const PlanGraph& graph, int start, const PlanGoal& goal,
                 double goal_dwell = -1.0) {
    if (start < 0 || start >= static_cast<int>(graph.vertices.size()))
        throw InvalidArgument("start vertex out of range");
    const double dwell = goal_dwell >= 0.0 ? goal_dwell : graph.params.goal_dwell;

    const auto matches = [&](int v) {
        if (graph.vertices[v].is_rest) return false;
        if (std::holds_alternative<int>(goal))
            return graph.vertices[v].mode == std::get<int>(goal);
        return false;
    };
    int target = -1;
    if (std::holds_alternative<ParamPoint>(goal)) {
        const ParamPoint& g = std::get<ParamPoint>(goal);
        double best         = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
            if (graph.vertices[v].is_rest) continue;
            const ParamPoint& p = graph.vertices[v].point;
            const double dL     = (p.L_bar - g.L_bar) / graph.bounds.L_bar_max;
            const double dT     = (p.T_bar - g.T_bar) / graph.bounds.T_bar_max;
            const double dc     = (p.c - g.c) / graph.bounds.c_max;
            const double d      = dL * dL + dT * dT + dc * dc;
            if (d < best) {
                best   = d;
                target = static_cast<int>(v);
            }
        }
        if (target < 0) throw NoPath();
    }

    const std::size_t n = graph.vertices.size();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev_vertex(n, -1), prev_edge(n, -1);
    std::vector<bool> settled(n, false);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[start] = 0.0;
    queue.push({0.0, start});

    int found = -1;
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (settled[v]) continue;
        settled[v] = true;
        if ((target >= 0 && v == target) || (target < 0 && matches(v))) {
            found = v;
            break;
        }
        for (const int ei : graph.adjacency[v]) {
            const EdgeRecord& e = graph.edges[ei];
            const int w         = e.from == v ? e.to : e.from;
            if (settled[w]) continue;
            const double nd = d + e.weight;
            if (nd < dist[w]) {
                dist[w]        = nd;
                prev_vertex[w] = v;
                prev_edge[w]   = ei;
                queue.push({nd, w});
            }
        }
    }
    if (found < 0) throw NoPath();

    std::vector<int> order;
    std::vector<int> edge_order;
    for (int v = found; v != -1; v = prev_vertex[v]) {
        order.push_back(v);
        if (prev_edge[v] >= 0) edge_order.push_back(prev_edge[v]);
    }
    std::reverse(order.begin(), order.end());
    std::reverse(edge_order.begin(), edge_order.end());

    Plan out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const GraphVertex& v = graph.vertices[order[i]];
        out.nodes.push_back(
            {v.point, v.control, v.mode, i + 1 == order.size() ? dwell : 0.0});
    }
    for (const int ei : edge_order) out.edges.push_back(graph.edges[ei]);
    return out;
}

/// Expand a plan into a rate-limited piecewise-linear control history: per
/// hop, ramp every axis linearly over the time the slowest axis needs, then
/// hold through any dwell.
inline ControlTrajectory synthesize_trajectory(const Plan& plan, const RobotLimits& limits) {
    limits.validate();
    if (plan.nodes.empty()) throw InvalidArgument("plan has no nodes");

    ControlTrajectory traj;
    double t = 0.0;
    const ControlInput& u0 = plan.nodes.front().control;
    traj.samples.push_back({0.0, u0.r, u0.omega, u0.h});
    if (plan.nodes.front().dwell > 0.0) {
        t += plan.nodes.front().dwell;
        traj.samples.push_back({t, u0.r, u0.omega, u0.h});
    }
    for (std::size_t i = 1; i < plan.nodes.size(); ++i) {
        const ControlInput& a = plan.nodes[i - 1].control;
        const ControlInput& b = plan.nodes[i].control;
        const double duration =
            std::max({std::abs(b.r - a.r) / limits.r_rate,
                      std::abs(b.omega - a.omega) / limits.omega_rate,
                      std::abs(b.h - a.h) / limits.h_rate});
        if (duration > 0.0) {
            t += duration;
            traj.samples.push_back({t, b.r, b.omega, b.h});
        }
        if (plan.nodes[i].dwell > 0.0) {
            t += plan.nodes[i].dwell;
            traj.samples.push_back({t, b.r, b.omega, b.h});
        }
    }
    return traj;
}

}  // namespace rotchain
