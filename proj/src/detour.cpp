#include <functional>

#include "detour_internal.hpp"

namespace scope {

namespace {

void check_query(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures, VertexId s,
                 VertexId t) {
    validate_scope_mapping(scope, network);
    if (closures.edge_count() != network.edge_count()) throw InvalidInput("closure set does not match network");
    if (s >= network.vertex_count() || t >= network.vertex_count()) throw InvalidInput("unknown endpoint");
}

std::uint16_t bit(Level l) { return static_cast<std::uint16_t>(1u << l); }

double effective_cost(const RoadNetwork& network, const std::vector<bool>& blocked, const Walk& walk) {
    double c = 0;
    for (EdgeId e : walk.edges) c += blocked[e] ? kInf : network.weight(e, Weighting::Updated);
    return c;
}

}  // namespace

std::vector<ObstructionRecord> find_obstructed(const RoadNetwork& network, const ScopeMapping& scope,
                                               const ClosureSet& closures, VertexId s, VertexId t,
                                               ObstructionBackend backend) {
    check_query(network, scope, closures, s, t);
    auto labels = detail::static_labels(network, scope, s, t, backend);
    std::size_t scanned = 0;
    return detail::obstructions(network, scope, closures.blocking_mask(), s, t, labels, backend, scanned);
}

DetourContext make_detour_context(const RoadNetwork& network, const ScopeMapping& scope,
                                  const ClosureSet& closures, VertexId s, VertexId t, ObstructionBackend backend) {
    check_query(network, scope, closures, s, t);
    const std::size_t n = network.vertex_count();
    DetourContext c;
    c.s = s;
    c.t = t;
    c.top = scope.top();
    c.levels.assign(scope.levels().begin(), scope.levels().end());
    c.blocked = closures.blocking_mask();
    auto labels = detail::static_labels(network, scope, s, t, backend);
    c.forward_admissible = labels.forward_admissible;
    c.reverse_admissible = labels.reverse_admissible;
    c.scanned = labels.scanned;
    c.records = detail::obstructions(network, scope, c.blocked, s, t, labels, backend, c.scanned);
    c.permit_levels.assign(n, 0);
    c.reverse_levels.assign(n, 0);
    c.leave_above.assign(n, 0);
    c.enter_above.assign(n, 0);
    for (const auto& r : c.records) {
        if (!r.permit) continue;
        (r.side == Side::ForTarget ? c.permit_levels : c.reverse_levels)[r.vertex] |= bit(r.level);
    }
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        if (c.blocked[e]) continue;
        const Level le = scope.level(e);
        for (Level l = 0; l < le && l < c.top; ++l) {
            c.leave_above[network.edge(e).tail] |= bit(l);
            c.enter_above[network.edge(e).head] |= bit(l);
        }
    }
    return c;
}

bool validate_simple_detour(const RoadNetwork& network, const ScopeMapping& scope, const DetourContext& c,
                            const Walk& walk) {
    check_walk(network, walk);
    if (walk.start != c.s || walk_end(network, walk) != c.t) throw InvalidInput("walk is not an s-t walk");
    const std::size_t k = walk.size();
    for (EdgeId e : walk.edges)
        if (c.blocked[e]) return false;
    const auto u = walk_vertices(network, walk);
    std::vector<bool> ok_prefix(k + 1), ok_suffix(k + 1);
    for (std::size_t m = 1; m <= k; ++m) {
        const EdgeId e = walk.edges[m - 1];
        const Level l = scope.level(e);
        bool permitted = false;
        if (l < c.top) {
            // Forward: obstructed u_i (i < m), no u_{i+1..m-1} left above l.
            for (std::size_t i = 0; i < m && !permitted; ++i) {
                if (!(c.permit_levels[u[i]] & bit(l))) continue;
                bool open = true;
                for (std::size_t p = i + 1; p <= m - 1 && open; ++p)
                    if (c.leave_above[u[p]] & bit(l)) open = false;
                permitted = open;
            }
            // Reverse: obstructed u_i (i >= m), no u_{m..i-1} entered above l.
            for (std::size_t i = m; i <= k && !permitted; ++i) {
                if (!(c.reverse_levels[u[i]] & bit(l))) continue;
                bool open = true;
                for (std::size_t p = m; p < i && open; ++p)
                    if (c.enter_above[u[p]] & bit(l)) open = false;
                permitted = open;
            }
        }
        ok_prefix[m] = permitted || c.forward_admissible[e];
        ok_suffix[m] = permitted || c.reverse_admissible[e];
    }
    // Some j with edges 1..j ok as prefix and j+1..k ok as suffix.
    std::vector<bool> suffix_from(k + 2, true);
    for (std::size_t m = k; m >= 1; --m) suffix_from[m] = suffix_from[m + 1] && ok_suffix[m];
    bool prefix = true;
    for (std::size_t j = 0; j <= k; ++j) {
        if (j > 0) prefix = prefix && ok_prefix[j];
        if (!prefix) return false;
        if (suffix_from[j + 1]) return true;
    }
    return false;
}

bool validate_simple_detour(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                            const Walk& walk, VertexId s, VertexId t) {
    auto c = make_detour_context(network, scope, closures, s, t, ObstructionBackend::Enumerate);
    return validate_simple_detour(network, scope, c, walk);
}

namespace {

DetourResult detour_route(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                          VertexId s, VertexId t, DetourClass detour_class) {
    DetourResult out;
    const auto blocked = closures.blocking_mask();
    auto P = bidirectional_s_dijkstra(network, scope, s, t, Weighting::Base);
    out.stats.scanned_static = P.scanned();
    if (P.reachable) {
        out.static_walk = P.walk;
        out.static_w = P.cost;
        out.static_wstar = effective_cost(network, blocked, P.walk);
        if (out.static_wstar == out.static_w) {
            out.walk = P.walk;
            out.cost = P.cost;
            out.cls = DetourClass::Static;
            out.permit_edges.assign(P.walk.size(), false);
            return out;
        }
    }
    auto ctx = make_detour_context(network, scope, closures, s, t, ObstructionBackend::Search);
    out.stats.scanned_obstruction = ctx.scanned;
    out.stats.obstructed = ctx.records.size();
    auto Q = detour_search(network, ctx);
    out.stats.scanned_detour = Q.scanned;
    if (Q.reachable && Q.cost < out.static_wstar) {
        out.walk = std::move(Q.walk);
        out.cost = Q.cost;
        out.cls = detour_class;
        out.permit_edges = std::move(Q.permit_edges);
    } else if (out.static_wstar < kInf) {
        out.walk = P.walk;
        out.cost = out.static_wstar;
        out.cls = DetourClass::Static;
        out.permit_edges.assign(P.walk.size(), false);
    }
    for (bool p : out.permit_edges) out.stats.permits += p;
    return out;
}

}  // namespace

DetourResult simple_detour_route(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                                 VertexId s, VertexId t) {
    check_query(network, scope, closures, s, t);
    return detour_route(network, scope, closures, s, t, DetourClass::SimpleDetour);
}

DetourResult enhanced_detour_route(const RoadNetwork& network, const ScopeMapping& scope,
                                   const ClosureSet& closures, VertexId s, VertexId t) {
    check_query(network, scope, closures, s, t);
    auto star = qc_closure(network, scope, closures, s, t);
    auto r = detour_route(network, scope, star, s, t, DetourClass::EnhancedDetour);
    r.stats.qc_edges = star.quasi_count();
    r.stats.qc_iterations = star.iterations;
    return r;
}

BruteForceResult brute_force_simple_detour(const RoadNetwork& network, const ScopeMapping& scope,
                                           const DetourContext& context, double cost_bound, std::size_t hop_bound,
                                           std::size_t walk_budget) {
    BruteForceResult best;
    // Prunes walks that cannot reach t within the bound even by the cheapest
    // closure-avoiding continuation.
    SearchOptions ro;
    ro.direction = Direction::Reverse;
    ro.weighting = Weighting::Updated;
    ro.excluded = context.blocked;
    const auto to_t = dijkstra(network, context.t, ro).dist;
    std::size_t visited = 0;
    bool exhausted = false;
    Walk w{context.s, {}};
    std::function<void(VertexId, double)> dfs = [&](VertexId u, double cost) {
        if (exhausted) return;
        if (++visited > walk_budget) {
            exhausted = true;
            return;
        }
        if (u == context.t && cost < best.cost && validate_simple_detour(network, scope, context, w)) {
            best.cost = cost;
            best.walk = w;
        }
        if (w.size() >= hop_bound) return;
        for (EdgeId e : network.out_edges(u)) {
            if (context.blocked[e]) continue;
            const double nc = cost + network.weight(e, Weighting::Updated);
            const double lower = nc + to_t[network.edge(e).head];
            if (lower > cost_bound || !(lower < best.cost)) continue;
            w.edges.push_back(e);
            dfs(network.edge(e).head, nc);
            w.edges.pop_back();
        }
    };
    dfs(context.s, 0.0);
    if (exhausted) {
        best.status = BruteStatus::BudgetExceeded;
    } else {
        best.status = best.cost < kInf ? BruteStatus::Found : BruteStatus::Unreachable;
    }
    return best;
}

}  // namespace scope
