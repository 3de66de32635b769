#include "scope/search.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "engine.hpp"

namespace scope {

namespace detail {

SearchEngine::SearchEngine(const RoadNetwork& network, const ScopeMapping* scope, VertexId source,
                           const SearchOptions& options)
    : net_(network), scope_(scope), opt_(options) {
    const std::size_t n = network.vertex_count();
    if (source >= n) throw InvalidInput("search source " + std::to_string(source) + " is not a vertex");
    if (!opt_.excluded.empty() && opt_.excluded.size() != network.edge_count())
        throw InvalidInput("excluded edge mask has wrong size");
    if (scope_) validate_scope_mapping(*scope_, network);
    r_.source = source;
    r_.direction = opt_.direction;
    r_.levels = scope_ ? scope_->level_count() : 0;
    r_.dist.assign(n, kInf);
    r_.pred.assign(n, kNoEdge);
    r_.sigma.assign(n * r_.levels, kInf);
    r_.scanned.assign(n, false);
    r_.relaxed.assign(network.edge_count(), false);
    scan_count_.assign(n, 0);

    r_.dist[source] = 0.0;
    if (scope_) {
        if (opt_.initial) {
            if (opt_.initial->size() != r_.levels) throw InvalidInput("initial vector has wrong size");
            for (std::size_t l = 0; l < r_.levels; ++l) r_.sigma[source * r_.levels + l] = (*opt_.initial)[l];
        } else {
            for (std::size_t l = 0; l < r_.levels; ++l) r_.sigma[source * r_.levels + l] = 0.0;
        }
    }
    touched_.push_back(source);
    pq_.emplace(0.0, source);
}

void SearchEngine::skip_stale() {
    while (!pq_.empty()) {
        auto [d, u] = pq_.top();
        if (r_.scanned[u] || d > r_.dist[u]) {
            pq_.pop();
            continue;
        }
        break;
    }
}

bool SearchEngine::done() const {
    return pq_.empty() || (opt_.target != kNoVertex && r_.scanned[opt_.target]);
}

double SearchEngine::top_key() {
    skip_stale();
    return pq_.empty() ? kInf : pq_.top().first;
}

VertexId SearchEngine::step() {
    skip_stale();
    if (pq_.empty()) return kNoVertex;
    const VertexId u = pq_.top().second;
    pq_.pop();
    r_.scanned[u] = true;
    ++r_.scanned_count;
    r_.max_scans_per_vertex = std::max<std::size_t>(r_.max_scans_per_vertex, ++scan_count_[u]);

    const bool forward = opt_.direction == Direction::Forward;
    const auto edges = forward ? net_.out_edges(u) : net_.in_edges(u);
    const std::size_t L = r_.levels;
    for (EdgeId f : edges) {
        if (!opt_.excluded.empty() && opt_.excluded[f]) continue;
        const double wf = net_.weight(f, opt_.weighting);
        if (wf == kInf) continue;
        const Edge& ed = net_.edge(f);
        const VertexId v = forward ? ed.head : ed.tail;
        Level lf = 0;
        if (scope_) {
            lf = scope_->level(f);
            // s-admissibility gate on the draw accumulated at u.
            if (!(r_.sigma[u * L + lf] <= scope_->nu(lf))) continue;
        }
        r_.relaxed[f] = true;
        ++r_.relaxed_count;
        const double nd = r_.dist[u] + wf;
        if (nd < r_.dist[v]) {
            if (r_.dist[v] == kInf) touched_.push_back(v);
            r_.dist[v] = nd;
            r_.pred[v] = f;
            if (scope_) {
                for (std::size_t l = 0; l < L; ++l)
                    r_.sigma[v * L + l] = r_.sigma[u * L + l] + (lf > l ? wf : 0.0);
            }
            pq_.emplace(nd, v);
        } else if (nd == r_.dist[v] && scope_) {
            for (std::size_t l = 0; l < L; ++l)
                r_.sigma[v * L + l] =
                    std::min(r_.sigma[v * L + l], r_.sigma[u * L + l] + (lf > l ? wf : 0.0));
        }
    }
    return u;
}

void SearchEngine::run() {
    while (!done()) {
        if (step() == kNoVertex) break;
    }
}

}  // namespace detail

DrawVector SearchResult::sigma_of(VertexId v) const {
    std::vector<double> out(sigma.begin() + v * levels, sigma.begin() + (v + 1) * levels);
    return DrawVector(std::move(out));
}

Walk extract_walk(const RoadNetwork& network, const SearchResult& result, VertexId v) {
    if (v >= network.vertex_count()) throw InvalidInput("extract_walk: unknown vertex");
    Walk w;
    if (!result.reached(v)) return w;
    const bool forward = result.direction == Direction::Forward;
    std::vector<EdgeId> chain;
    VertexId at = v;
    while (result.pred[at] != kNoEdge) {
        EdgeId e = result.pred[at];
        chain.push_back(e);
        at = forward ? network.edge(e).tail : network.edge(e).head;
        if (chain.size() > network.edge_count() + 1)
            throw InvalidInput("extract_walk: predecessor cycle");
    }
    if (forward) {
        w.start = result.source;
        w.edges.assign(chain.rbegin(), chain.rend());
    } else {
        w.start = v;
        w.edges = std::move(chain);
    }
    return w;
}

SearchResult dijkstra(const RoadNetwork& network, VertexId source, const SearchOptions& options) {
    detail::SearchEngine engine(network, nullptr, source, options);
    engine.run();
    return std::move(engine.result());
}

SearchResult s_dijkstra(const RoadNetwork& network, const ScopeMapping& scope, VertexId source,
                        const SearchOptions& options) {
    SearchOptions opt = options;
    opt.target = kNoVertex;
    detail::SearchEngine engine(network, &scope, source, opt);
    engine.run();
    return std::move(engine.result());
}

RouteResult bidirectional_s_dijkstra(const RoadNetwork& network, const ScopeMapping& scope,
                                     VertexId s, VertexId t, Weighting weighting,
                                     const std::vector<bool>& excluded) {
    if (t >= network.vertex_count()) throw InvalidInput("target is not a vertex");
    SearchOptions fo;
    fo.weighting = weighting;
    fo.excluded = excluded;
    SearchOptions ro = fo;
    ro.direction = Direction::Reverse;
    detail::SearchEngine fwd(network, &scope, s, fo);
    detail::SearchEngine rev(network, &scope, t, ro);

    double best = kInf;
    auto consider = [&](VertexId u) {
        const double c = fwd.result().dist[u] + rev.result().dist[u];
        if (c < best) best = c;
    };
    while (true) {
        const double kf = fwd.top_key();
        const double kr = rev.top_key();
        const bool f_open = kf < best;
        const bool r_open = kr < best;
        if (!f_open && !r_open) break;
        VertexId u;
        if (f_open && (!r_open || kf <= kr)) {
            u = fwd.step();
        } else {
            u = rev.step();
        }
        if (u != kNoVertex) consider(u);
    }

    RouteResult out;
    out.scanned_forward = fwd.result().scanned_count;
    out.scanned_reverse = rev.result().scanned_count;
    // Best split over every vertex labelled in both directions; ties by vertex id.
    VertexId meet = kNoVertex;
    double cost = kInf;
    for (VertexId v : fwd.touched()) {
        const double c = fwd.result().dist[v] + rev.result().dist[v];
        if (c < cost || (c == cost && c < kInf && v < meet)) {
            cost = c;
            meet = v;
        }
    }
    if (meet == kNoVertex) return out;
    out.reachable = true;
    out.cost = cost;
    out.meeting = meet;
    Walk prefix = extract_walk(network, fwd.result(), meet);
    Walk suffix = extract_walk(network, rev.result(), meet);
    out.walk.start = s;
    out.walk.edges = std::move(prefix.edges);
    out.walk.edges.insert(out.walk.edges.end(), suffix.edges.begin(), suffix.edges.end());
    return out;
}

bool is_saturated(const DrawVector& sigma, const ScopeMapping& scope) {
    for (Level l = 0; l < scope.top(); ++l)
        if (!(sigma[l] > scope.nu(l))) return false;
    return true;
}

// ---------------------------------------------------------------------------

AdmissibilityOracle::AdmissibilityOracle(const RoadNetwork& network, const ScopeMapping& scope,
                                         VertexId root, const OracleOptions& options)
    : root_(root) {
    const std::size_t n = network.vertex_count();
    const std::size_t L = scope.level_count();
    if (root >= n) throw InvalidInput("oracle root is not a vertex");
    validate_scope_mapping(scope, network);
    const bool forward = options.direction == Direction::Forward;
    auto usable = [&](EdgeId e) {
        if (!options.excluded.empty() && options.excluded[e]) return false;
        return network.weight(e, options.weighting) < kInf;
    };
    for (EdgeId e = 0; e < network.edge_count(); ++e)
        if (usable(e) && !(network.weight(e, options.weighting) > 0.0))
            throw InvalidInput("enumerative oracle requires positive edge weights");

    // Every simple path from the root as a node of a prefix tree.
    struct Node {
        std::uint32_t parent;
        EdgeId edge;
        VertexId end;
        double weight;
        bool admissible;
    };
    std::vector<Node> nodes;
    nodes.push_back({0, kNoEdge, root, 0.0, true});
    std::vector<bool> on_path(n, false);
    std::function<void(std::uint32_t)> dfs = [&](std::uint32_t id) {
        if (!complete_) return;
        const VertexId u = nodes[id].end;
        on_path[u] = true;
        for (EdgeId e : forward ? network.out_edges(u) : network.in_edges(u)) {
            if (!usable(e)) continue;
            const VertexId v = forward ? network.edge(e).head : network.edge(e).tail;
            if (on_path[v]) continue;
            if (nodes.size() >= options.path_budget) {
                complete_ = false;
                break;
            }
            nodes.push_back({id, e, v, nodes[id].weight + network.weight(e, options.weighting), false});
            dfs(static_cast<std::uint32_t>(nodes.size() - 1));
        }
        on_path[u] = false;
    };
    dfs(0);

    std::vector<std::uint32_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return nodes[a].weight < nodes[b].weight; });

    dist_.assign(n, kInf);
    draw_.assign(n, DrawVector::infinite(L));
    dist_[root] = 0.0;
    draw_[root] = options.initial ? *options.initial : DrawVector::zero(L);
    // Draw of each tree node's path, computed on demand from the parent chain.
    std::vector<DrawVector> node_draw(nodes.size());
    node_draw[0] = DrawVector::zero(L);
    for (std::uint32_t id : order) {
        if (id == 0) continue;
        Node& nd = nodes[id];
        const Node& parent = nodes[nd.parent];
        node_draw[id] = node_draw[nd.parent];
        add_edge_draw(node_draw[id], scope.level(nd.edge), network.weight(nd.edge, options.weighting));
        if (!parent.admissible) continue;
        const VertexId tail = parent.end;
        const Level l = scope.level(nd.edge);
        if (!(dist_[tail] < nd.weight) || !(draw_[tail][l] <= scope.nu(l))) continue;
        nd.admissible = true;
        if (dist_[nd.end] == kInf || dist_[nd.end] == nd.weight) {
            dist_[nd.end] = nd.weight;
            DrawVector total = node_draw[id];
            if (options.initial) total += *options.initial;
            draw_[nd.end].min_with(total);
        }
    }
    admissible_.assign(network.edge_count(), false);
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        if (!usable(e)) continue;
        const VertexId tail = forward ? network.edge(e).tail : network.edge(e).head;
        const Level l = scope.level(e);
        admissible_[e] = dist_[tail] < kInf && draw_[tail][l] <= scope.nu(l);
    }
}

bool validate_s_admissible(const RoadNetwork& network, const ScopeMapping& scope, const Walk& walk,
                           VertexId s, Weighting weighting) {
    check_walk(network, walk);
    if (walk.start != s) throw InvalidInput("walk does not start at s");
    if (walk.empty()) return true;
    OracleOptions opt;
    opt.weighting = weighting;
    AdmissibilityOracle oracle(network, scope, s, opt);
    return std::all_of(walk.edges.begin(), walk.edges.end(),
                       [&](EdgeId e) { return oracle.admissible(e); });
}

bool split_admissible(const RoadNetwork& network, const Walk& walk, const std::vector<bool>& forward,
                      const std::vector<bool>& reverse) {
    (void)network;
    const std::size_t k = walk.edges.size();
    // prefix_ok[j]: edges 1..j forward-admissible; suffix_ok[j]: edges j+1..k reverse-admissible.
    std::vector<bool> suffix_ok(k + 1, true);
    for (std::size_t j = k; j-- > 0;) suffix_ok[j] = suffix_ok[j + 1] && reverse[walk.edges[j]];
    bool prefix = true;
    for (std::size_t j = 0; j <= k; ++j) {
        if (j > 0) prefix = prefix && forward[walk.edges[j - 1]];
        if (!prefix) return false;
        if (suffix_ok[j]) return true;
    }
    return false;
}

bool validate_S_admissible(const RoadNetwork& network, const ScopeMapping& scope, const Walk& walk,
                           VertexId s, VertexId t, Weighting weighting) {
    check_walk(network, walk);
    if (walk.start != s || walk_end(network, walk) != t)
        throw InvalidInput("walk is not an s-t walk");
    if (walk.empty()) return true;
    OracleOptions fo;
    fo.weighting = weighting;
    OracleOptions ro = fo;
    ro.direction = Direction::Reverse;
    AdmissibilityOracle fwd(network, scope, s, fo);
    AdmissibilityOracle rev(network, scope, t, ro);
    return split_admissible(network, walk, fwd.admissible_edges(), rev.admissible_edges());
}

BruteForceResult brute_force_optimal_admissible(const RoadNetwork& network, const ScopeMapping& scope,
                                                VertexId s, VertexId t, std::size_t hop_bound,
                                                AdmissibilityKind kind, std::size_t walk_budget) {
    if (s >= network.vertex_count() || t >= network.vertex_count())
        throw InvalidInput("brute force: unknown endpoint");
    BruteForceResult best;
    if (s == t) {
        best.status = BruteStatus::Found;
        best.cost = 0.0;
        best.walk.start = s;
        return best;
    }
    OracleOptions fo;
    AdmissibilityOracle fwd(network, scope, s, fo);
    std::optional<AdmissibilityOracle> rev;
    if (kind == AdmissibilityKind::Split) {
        OracleOptions ro;
        ro.direction = Direction::Reverse;
        rev.emplace(network, scope, t, ro);
    }
    if (!fwd.complete() || (rev && !rev->complete())) {
        best.status = BruteStatus::BudgetExceeded;
        return best;
    }

    std::size_t visited = 0;
    bool exhausted = false;
    std::vector<EdgeId> stack;
    // phase 0: still in the s-admissible prefix; phase 1: in the reverse-admissible suffix.
    std::function<void(VertexId, double, int)> dfs = [&](VertexId u, double cost, int phase) {
        if (exhausted) return;
        if (++visited > walk_budget) {
            exhausted = true;
            return;
        }
        if (u == t && cost < best.cost) {
            best.cost = cost;
            best.walk.start = s;
            best.walk.edges = stack;
        }
        if (stack.size() >= hop_bound) return;
        for (EdgeId e : network.out_edges(u)) {
            const double w = network.weight(e);
            if (!(cost + w < best.cost)) continue;
            const VertexId v = network.edge(e).head;
            for (int ph = phase; ph <= (kind == AdmissibilityKind::Split ? 1 : 0); ++ph) {
                const bool ok = ph == 0 ? fwd.admissible(e) : rev->admissible(e);
                if (!ok) continue;
                stack.push_back(e);
                dfs(v, cost + w, ph);
                stack.pop_back();
            }
        }
    };
    dfs(s, 0.0, 0);
    if (exhausted) {
        best.status = BruteStatus::BudgetExceeded;
        return best;
    }
    best.status = best.cost < kInf ? BruteStatus::Found : BruteStatus::Unreachable;
    if (best.status == BruteStatus::Unreachable) best.walk = Walk{};
    return best;
}

}  // namespace scope
