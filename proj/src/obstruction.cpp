#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "detour_internal.hpp"

namespace scope::detail {

namespace {

// Walks are followed from d towards `root` along `forward` orientation:
// ForTarget walks run in G towards t, ForStart walks run in G^R towards s.
struct View {
    const RoadNetwork& g;
    bool forward;

    std::span<const EdgeId> out(VertexId x) const { return forward ? g.out_edges(x) : g.in_edges(x); }
    std::span<const EdgeId> in(VertexId x) const { return forward ? g.in_edges(x) : g.out_edges(x); }
    VertexId head(EdgeId e) const { return forward ? g.edge(e).head : g.edge(e).tail; }
    VertexId tail(EdgeId e) const { return forward ? g.edge(e).tail : g.edge(e).head; }
};

Level level_of(const DrawVector& state, const ScopeMapping& scope) {
    for (Level l = 0; l <= scope.top(); ++l)
        if (state[l] <= scope.nu(l)) return l;
    return scope.top();
}

ObstructionRecord make_record(VertexId d, Side side, const DrawVector& state, EdgeId ref,
                              std::optional<DrawVector> omega, const ScopeMapping& scope) {
    ObstructionRecord r;
    r.vertex = d;
    r.side = side;
    r.state = state;
    r.level = level_of(state, scope);
    r.closure = ref;
    r.omega = std::move(omega);
    r.permit = r.level < scope.top();
    return r;
}

DrawVector plus_edge(DrawVector v, const ScopeMapping& scope, const RoadNetwork& g, EdgeId e) {
    add_edge_draw(v, scope.level(e), g.weight(e));
    return v;
}

// Component-wise min; also keeps the closure reference of whichever side
// holds the smaller level-0 component.
void merge(DrawVector& into, EdgeId& into_ref, const DrawVector& from, EdgeId from_ref) {
    if (from[0] < into[0] || (from[0] == into[0] && from_ref < into_ref)) into_ref = from_ref;
    into.min_with(from);
}

// --- Search backend ------------------------------------------------------

// All-inf variant for every vertex at once. Layer 1 follows `suffix` edges
// (distance to root d1), layer 0 follows top-level edges and may drop into
// layer 1 for free. X = min draw to the first blocked edge along tight walks.
void all_inf_variant(const View& v, const ScopeMapping& scope, const std::vector<bool>& blocked,
                     const std::vector<bool>& suffix, VertexId root, Side side,
                     std::vector<ObstructionRecord>& out, std::vector<double>& d1, std::size_t& scanned) {
    const RoadNetwork& g = v.g;
    const std::size_t n = g.vertex_count();
    const std::size_t L = scope.level_count();
    const Level top = scope.top();

    // Distances to root: walk backwards against the view's orientation.
    d1.assign(n, kInf);
    std::vector<double> d0(n, kInf);
    using Item = std::pair<double, VertexId>;
    {
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d1[root] = 0;
        pq.emplace(0.0, root);
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > d1[x]) continue;
            ++scanned;
            for (EdgeId e : v.in(x)) {
                if (!suffix[e]) continue;
                const VertexId y = v.tail(e);
                const double nd = d + g.weight(e);
                if (nd < d1[y]) {
                    d1[y] = nd;
                    pq.emplace(nd, y);
                }
            }
        }
    }
    {
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (VertexId x = 0; x < n; ++x)
            if (d1[x] < kInf) {
                d0[x] = d1[x];
                pq.emplace(d0[x], x);
            }
        while (!pq.empty()) {
            auto [d, x] = pq.top();
            pq.pop();
            if (d > d0[x]) continue;
            ++scanned;
            for (EdgeId e : v.in(x)) {
                if (scope.level(e) != top) continue;
                const VertexId y = v.tail(e);
                const double nd = d + g.weight(e);
                if (nd < d0[y]) {
                    d0[y] = nd;
                    pq.emplace(nd, y);
                }
            }
        }
    }

    // DP in increasing distance; at equal distance layer 1 precedes layer 0.
    std::vector<std::uint32_t> order;
    for (VertexId x = 0; x < n; ++x) {
        if (d1[x] < kInf) order.push_back(2 * x + 1);
        if (d0[x] < kInf) order.push_back(2 * x);
    }
    auto dist_of = [&](std::uint32_t node) { return node & 1 ? d1[node >> 1] : d0[node >> 1]; };
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double da = dist_of(a), db = dist_of(b);
        if (da != db) return da < db;
        if ((a & 1) != (b & 1)) return (a & 1) > (b & 1);
        return a < b;
    });
    std::vector<DrawVector> X(2 * n);
    std::vector<EdgeId> ref(2 * n, kNoEdge);
    for (std::uint32_t node : order) {
        const VertexId x = node >> 1;
        const bool layer1 = node & 1;
        DrawVector best = DrawVector::infinite(L);
        EdgeId best_ref = kNoEdge;
        const std::vector<double>& dist = layer1 ? d1 : d0;
        for (EdgeId e : v.out(x)) {
            if (layer1 ? !suffix[e] : scope.level(e) != top) continue;
            const VertexId y = v.head(e);
            if (!(dist[y] < kInf) || dist[y] + g.weight(e) != dist[x]) continue;
            if (blocked[e]) {
                merge(best, best_ref, DrawVector::zero(L), e);
            } else if (X[2 * y + layer1].size()) {
                merge(best, best_ref, plus_edge(X[2 * y + layer1], scope, g, e), ref[2 * y + layer1]);
            }
        }
        if (!layer1 && d1[x] == d0[x] && X[2 * x + 1].size()) merge(best, best_ref, X[2 * x + 1], ref[2 * x + 1]);
        X[node] = std::move(best);
        ref[node] = best_ref;
    }
    for (VertexId x = 0; x < n; ++x) {
        if (x == root || !(d0[x] < kInf)) continue;
        const DrawVector& s = X[2 * x];
        if (s.size() && s[top] < kInf) out.push_back(make_record(x, side, s, ref[2 * x], std::nullopt, scope));
    }
}

// Variant amended with omega at a single vertex d. Goal-directed product
// search: layer 0 is the (d, omega)-seeded scope search, layer 1 follows
// `suffix`. Potentials: plain distance to root on layer 0, suffix distance
// h1 >= h on layer 1; both consistent, including the free drop 0 -> 1.
// Labels live in flat arrays reused across calls; a stamp marks the live ones.
class OmegaSearch {
public:
    OmegaSearch(const View& v, const ScopeMapping& scope, const std::vector<bool>& blocked,
                const std::vector<bool>& suffix, VertexId root, const std::vector<double>& h,
                const std::vector<double>& h1)
        : v_(v), scope_(scope), blocked_(blocked), suffix_(suffix), root_(root), h_(h), h1_(h1),
          L_(scope.level_count()), g_(2 * v.g.vertex_count()), ref_(g_.size()), stamp_(g_.size(), 0),
          done_(g_.size()), draws_(g_.size() * 3 * L_) {}

    std::optional<ObstructionRecord> run(VertexId d, const DrawVector& omega, Side side, std::size_t& scanned) {
        if (!(h_[d] < kInf)) return std::nullopt;
        ++epoch_;
        pq_ = {};
        const std::uint32_t s0 = 2 * d;
        touch(s0);
        g_[s0] = 0;
        for (std::size_t l = 0; l < L_; ++l) {
            sigma(s0)[l] = omega[l];
            G(s0)[l] = 0;
            F(s0)[l] = kInf;
        }
        pq_.emplace(h_[d], 0.0, s0);

        const std::uint32_t goal = 2 * root_ + 1;
        bool reached = false;
        while (!pq_.empty()) {
            auto [f, gg, u] = pq_.top();
            pq_.pop();
            if (done_[u] || gg > g_[u]) continue;
            done_[u] = 1;
            ++scanned;
            if (u == goal) {
                reached = true;
                break;
            }
            const VertexId x = u >> 1;
            if (!(u & 1)) {
                relax(u, u + 1, kNoEdge);
                for (EdgeId e : v_.out(x)) {
                    const Level l = scope_.level(e);
                    if (!(sigma(u)[l] <= scope_.nu(l))) continue;
                    relax(u, 2 * v_.head(e), e);
                }
            } else {
                for (EdgeId e : v_.out(x))
                    if (suffix_[e]) relax(u, 2 * v_.head(e) + 1, e);
            }
        }
        if (!reached || !(F(goal)[scope_.top()] < kInf)) return std::nullopt;
        DrawVector state(std::vector<double>(F(goal), F(goal) + L_));
        return make_record(d, side, state, ref_[goal], omega, scope_);
    }

private:
    using Item = std::tuple<double, double, std::uint32_t>;

    double* sigma(std::uint32_t node) { return &draws_[node * 3 * L_]; }
    double* G(std::uint32_t node) { return sigma(node) + L_; }
    double* F(std::uint32_t node) { return sigma(node) + 2 * L_; }

    void touch(std::uint32_t node) {
        if (stamp_[node] == epoch_) return;
        stamp_[node] = epoch_;
        g_[node] = kInf;
        ref_[node] = kNoEdge;
        done_[node] = 0;
    }

    void relax(std::uint32_t from, std::uint32_t to, EdgeId e) {
        const VertexId y = to >> 1;
        const double hy = to & 1 ? h1_[y] : h_[y];
        if (!(hy < kInf)) return;
        touch(to);
        if (done_[to]) return;
        const double w = e == kNoEdge ? 0.0 : v_.g.weight(e);
        const double ng = g_[from] + w;
        if (ng > g_[to]) return;
        const Level el = e == kNoEdge ? 0 : scope_.level(e);
        // Candidate vectors, built in a scratch buffer.
        tmp_.resize(3 * L_);
        double* cs = tmp_.data();
        double* cg = cs + L_;
        double* cf = cs + 2 * L_;
        EdgeId cref = ref_[from];
        for (std::size_t l = 0; l < L_; ++l) {
            const double gamma = l < el ? w : 0.0;
            cs[l] = sigma(from)[l] + gamma;
            cg[l] = G(from)[l] + gamma;
            cf[l] = F(from)[l];
        }
        if (e != kNoEdge && blocked_[e]) merge(cf, cref, G(from), e);
        const bool layer0 = !(to & 1);
        if (ng < g_[to]) {
            g_[to] = ng;
            std::copy(cs, cs + 3 * L_, sigma(to));
            ref_[to] = cref;
            pq_.emplace(ng + hy, ng, to);
        } else {
            if (layer0)
                for (std::size_t l = 0; l < L_; ++l) sigma(to)[l] = std::min(sigma(to)[l], cs[l]);
            for (std::size_t l = 0; l < L_; ++l) G(to)[l] = std::min(G(to)[l], cg[l]);
            merge(F(to), ref_[to], cf, cref);
        }
    }

    // Component-wise min keeping the reference of the smaller level-0 side.
    void merge(double* into, EdgeId& into_ref, const double* from, EdgeId from_ref) const {
        if (from[0] < into[0] || (from[0] == into[0] && from_ref < into_ref)) into_ref = from_ref;
        for (std::size_t l = 0; l < L_; ++l) into[l] = std::min(into[l], from[l]);
    }

    const View& v_;
    const ScopeMapping& scope_;
    const std::vector<bool>& blocked_;
    const std::vector<bool>& suffix_;
    VertexId root_;
    const std::vector<double>& h_;
    const std::vector<double>& h1_;
    std::size_t L_;
    std::vector<double> g_;
    std::vector<EdgeId> ref_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint8_t> done_;
    std::vector<double> draws_;
    std::vector<double> tmp_;
    std::uint32_t epoch_ = 0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq_;
};

// Lower bound, per vertex x, on the weight of any x-root walk through a
// blocked edge: min over blocked e of dist(x, tail e) + w(e) + dist(head e, root).
std::vector<double> blocked_walk_bound(const View& v, const std::vector<bool>& blocked,
                                       const std::vector<double>& to_root, std::size_t& scanned) {
    const RoadNetwork& g = v.g;
    std::vector<double> lb(g.vertex_count(), kInf);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (!blocked[e] || !(to_root[v.head(e)] < kInf)) continue;
        const double key = g.weight(e) + to_root[v.head(e)];
        if (key < lb[v.tail(e)]) {
            lb[v.tail(e)] = key;
            pq.emplace(key, v.tail(e));
        }
    }
    while (!pq.empty()) {
        auto [k, x] = pq.top();
        pq.pop();
        if (k > lb[x]) continue;
        ++scanned;
        for (EdgeId e : v.in(x)) {
            const double nk = k + g.weight(e);
            const VertexId y = v.tail(e);
            if (nk < lb[y]) {
                lb[y] = nk;
                pq.emplace(nk, y);
            }
        }
    }
    return lb;
}

// --- Enumerative backend -------------------------------------------------

std::optional<std::pair<DrawVector, EdgeId>> enumerate_obstruction(const View& v, const ScopeMapping& scope,
                                                                   const std::vector<bool>& blocked,
                                                                   const std::vector<bool>& prefix,
                                                                   const std::vector<bool>& suffix,
                                                                   VertexId d, VertexId root,
                                                                   std::size_t& budget) {
    const RoadNetwork& g = v.g;
    const std::size_t L = scope.level_count();
    double best = kInf;
    DrawVector state = DrawVector::infinite(L);
    EdgeId ref = kNoEdge;
    std::vector<bool> on_path(g.vertex_count(), false);
    // first: draw to the first blocked edge on the path so far (inf if none).
    std::function<void(VertexId, int, double, DrawVector, DrawVector, EdgeId)> dfs =
        [&](VertexId x, int layer, double cost, DrawVector draw, DrawVector first, EdgeId first_ref) {
            if (budget == 0) throw BudgetExceeded("obstruction enumeration budget exceeded");
            --budget;
            if (cost > best) return;
            if (x == root) {
                if (cost < best) {
                    best = cost;
                    state = DrawVector::infinite(L);
                    ref = kNoEdge;
                }
                if (first[scope.top()] < kInf) merge(state, ref, first, first_ref);
                return;
            }
            on_path[x] = true;
            for (int next = layer; next <= 1; ++next) {
                for (EdgeId e : v.out(x)) {
                    if (next == 0 ? !prefix[e] : !suffix[e]) continue;
                    const VertexId y = v.head(e);
                    if (on_path[y]) continue;
                    DrawVector f2 = first;
                    EdgeId r2 = first_ref;
                    if (blocked[e] && !(first[scope.top()] < kInf)) {
                        f2 = draw;
                        r2 = e;
                    }
                    dfs(y, next, cost + g.weight(e), plus_edge(draw, scope, g, e), f2, r2);
                }
            }
            on_path[x] = false;
        };
    dfs(d, 0, 0.0, DrawVector::zero(L), DrawVector::infinite(L), kNoEdge);
    if (best < kInf && state[scope.top()] < kInf) return std::make_pair(state, ref);
    return std::nullopt;
}

}  // namespace

std::optional<ObstructionRecord> enumerate_obstructed(const RoadNetwork& network, const ScopeMapping& scope,
                                                      const std::vector<bool>& blocked,
                                                      const std::vector<bool>& suffix, Side side, VertexId d,
                                                      VertexId root, const std::optional<DrawVector>& omega,
                                                      std::size_t& budget) {
    const bool for_target = side == Side::ForTarget;
    OracleOptions o;
    o.direction = for_target ? Direction::Forward : Direction::Reverse;
    o.initial = omega ? *omega : DrawVector::infinite(scope.level_count());
    AdmissibilityOracle prefix(network, scope, d, o);
    if (!prefix.complete()) throw BudgetExceeded("admissibility enumeration budget exceeded");
    View v{network, for_target};
    auto r = enumerate_obstruction(v, scope, blocked, prefix.admissible_edges(), suffix, d, root, budget);
    if (!r) return std::nullopt;
    return make_record(d, side, r->first, r->second, omega, scope);
}

StaticLabels static_labels(const RoadNetwork& network, const ScopeMapping& scope, VertexId s, VertexId t,
                           ObstructionBackend backend) {
    StaticLabels st;
    const std::size_t n = network.vertex_count();
    const std::size_t L = scope.level_count();
    st.sigma_s.assign(n, DrawVector::infinite(L));
    st.sigma_t.assign(n, DrawVector::infinite(L));
    st.reach_s.assign(n, false);
    st.reach_t.assign(n, false);
    st.dist_s.assign(n, kInf);
    st.dist_t.assign(n, kInf);
    if (backend == ObstructionBackend::Search) {
        SearchOptions fo;
        SearchOptions ro;
        ro.direction = Direction::Reverse;
        auto f = s_dijkstra(network, scope, s, fo);
        auto r = s_dijkstra(network, scope, t, ro);
        st.forward_admissible = f.relaxed;
        st.reverse_admissible = r.relaxed;
        st.dist_s = f.dist;
        st.dist_t = r.dist;
        for (VertexId x = 0; x < n; ++x) {
            if (f.reached(x)) {
                st.reach_s[x] = true;
                st.sigma_s[x] = f.sigma_of(x);
            }
            if (r.reached(x)) {
                st.reach_t[x] = true;
                st.sigma_t[x] = r.sigma_of(x);
            }
        }
        st.scanned = f.scanned_count + r.scanned_count;
    } else {
        OracleOptions fo;
        OracleOptions ro;
        ro.direction = Direction::Reverse;
        AdmissibilityOracle f(network, scope, s, fo);
        AdmissibilityOracle r(network, scope, t, ro);
        if (!f.complete() || !r.complete()) throw BudgetExceeded("admissibility enumeration budget exceeded");
        st.forward_admissible = f.admissible_edges();
        st.reverse_admissible = r.admissible_edges();
        for (VertexId x = 0; x < n; ++x) {
            st.dist_s[x] = f.distance(x);
            st.dist_t[x] = r.distance(x);
            if (f.distance(x) < kInf) {
                st.reach_s[x] = true;
                st.sigma_s[x] = f.draw(x);
            }
            if (r.distance(x) < kInf) {
                st.reach_t[x] = true;
                st.sigma_t[x] = r.draw(x);
            }
        }
    }
    return st;
}

std::vector<ObstructionRecord> obstructions(const RoadNetwork& network, const ScopeMapping& scope,
                                            const std::vector<bool>& blocked, VertexId s, VertexId t,
                                            const StaticLabels& st, ObstructionBackend backend,
                                            std::size_t& scanned) {
    std::vector<ObstructionRecord> out;
    if (std::none_of(blocked.begin(), blocked.end(), [](bool b) { return b; })) return out;
    const std::size_t n = network.vertex_count();

    for (Side side : {Side::ForTarget, Side::ForStart}) {
        const bool for_target = side == Side::ForTarget;
        View v{network, for_target};
        const VertexId root = for_target ? t : s;
        const std::vector<bool>& suffix = for_target ? st.reverse_admissible : st.forward_admissible;
        const std::vector<DrawVector>& omega_src = for_target ? st.sigma_s : st.sigma_t;
        const std::vector<bool>& omega_reached = for_target ? st.reach_s : st.reach_t;

        if (backend == ObstructionBackend::Search) {
            std::vector<double> d1;
            all_inf_variant(v, scope, blocked, suffix, root, side, out, d1, scanned);
            // Plain distances to root for the goal-directed omega searches.
            SearchOptions o;
            o.direction = for_target ? Direction::Reverse : Direction::Forward;
            auto plain = dijkstra(network, root, o);
            scanned += plain.scanned_count;
            // An amended walk is never longer than the static admissible walk
            // to root, so d cannot be obstructed when that walk is strictly
            // shorter than every walk through a blocked edge.
            const auto lb = blocked_walk_bound(v, blocked, plain.dist, scanned);
            const std::vector<double>& static_to_root = for_target ? st.dist_t : st.dist_s;
            OmegaSearch search(v, scope, blocked, suffix, root, plain.dist, d1);
            for (VertexId d = 0; d < n; ++d) {
                if (d == root || !omega_reached[d] || is_saturated(omega_src[d], scope)) continue;
                if (static_to_root[d] < lb[d]) continue;
                auto rec = search.run(d, omega_src[d], side, scanned);
                if (rec) out.push_back(std::move(*rec));
            }
        } else {
            std::size_t budget = 50'000'000;
            for (VertexId d = 0; d < n; ++d) {
                if (d == root) continue;
                auto r = enumerate_obstructed(network, scope, blocked, suffix, side, d, root, std::nullopt, budget);
                if (r) out.push_back(std::move(*r));
                if (!omega_reached[d] || is_saturated(omega_src[d], scope)) continue;
                auto q = enumerate_obstructed(network, scope, blocked, suffix, side, d, root, omega_src[d], budget);
                if (q) out.push_back(std::move(*q));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const ObstructionRecord& a, const ObstructionRecord& b) {
        return std::make_tuple(a.side, a.vertex, a.omega.has_value()) <
               std::make_tuple(b.side, b.vertex, b.omega.has_value());
    });
    return out;
}

}  // namespace scope::detail
