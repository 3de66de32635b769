#include "scope/full.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <tuple>

#include "detour_internal.hpp"

namespace scope {

namespace {

std::vector<double> key_of(const DrawVector& v) { return {v.values().begin(), v.values().end()}; }

std::vector<bool> reaches(const RoadNetwork& g, VertexId root, bool forward) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<VertexId> queue{root};
    seen[root] = true;
    while (!queue.empty()) {
        const VertexId x = queue.front();
        queue.pop_front();
        for (EdgeId e : forward ? g.out_edges(x) : g.in_edges(x)) {
            const VertexId y = forward ? g.edge(e).head : g.edge(e).tail;
            if (!seen[y]) {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    return seen;
}

// Masks over candidate positions, fewest anchors first.
std::vector<std::uint32_t> masks_by_size(std::size_t bits) {
    std::vector<std::uint32_t> out(std::size_t(1) << bits);
    for (std::uint32_t m = 0; m < out.size(); ++m) out[m] = m;
    std::stable_sort(out.begin(), out.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
    return out;
}

class Checker {
public:
    Checker(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures, VertexId s,
            VertexId t, const FullOptions& options)
        : g_(network), scope_(scope), s_(s), t_(t), options_(options), budget_(options.enumeration_budget) {
        validate_scope_mapping(scope, network);
        if (closures.edge_count() != network.edge_count()) throw InvalidInput("closure set does not match network");
        if (s >= network.vertex_count() || t >= network.vertex_count()) throw InvalidInput("unknown endpoint");
        blocked_ = closures.blocking_mask();
        any_blocked_ = std::any_of(blocked_.begin(), blocked_.end(), [](bool b) { return b; });
        if (any_blocked_) {
            auto labels = detail::static_labels(network, scope, s, t, ObstructionBackend::Enumerate);
            forward_admissible_ = std::move(labels.forward_admissible);
            reverse_admissible_ = std::move(labels.reverse_admissible);
            // Necessary for obstruction: a blocked edge reachable from d that
            // still reaches the root.
            const std::size_t n = network.vertex_count();
            auto to_t = reaches(network, t, false);
            auto from_s = reaches(network, s, true);
            may_target_.assign(n, false);
            may_start_.assign(n, false);
            for (EdgeId e = 0; e < network.edge_count(); ++e) {
                if (!blocked_[e]) continue;
                const Edge& ed = network.edge(e);
                if (to_t[ed.head]) {
                    auto up = reaches(network, ed.tail, false);
                    for (VertexId x = 0; x < n; ++x) may_target_[x] = may_target_[x] || up[x];
                }
                if (from_s[ed.tail]) {
                    auto down = reaches(network, ed.head, true);
                    for (VertexId x = 0; x < n; ++x) may_start_[x] = may_start_[x] || down[x];
                }
            }
        }
    }

    FullVerdict validate(const Walk& walk) {
        check_walk(g_, walk);
        if (walk.start != s_ || walk_end(g_, walk) != t_) throw InvalidInput("walk is not an s-t walk");
        FullVerdict out;
        for (EdgeId e : walk.edges)
            if (blocked_[e]) return out;
        u_ = walk_vertices(g_, walk);
        edges_ = walk.edges;
        const std::size_t k = walk.size();
        std::vector<std::size_t> fc, rc;
        if (any_blocked_) {
            for (std::size_t m = 1; m < k; ++m) {
                if (may_target_[u_[m]]) fc.push_back(m);
                if (may_start_[u_[m]]) rc.push_back(m);
            }
        }
        if (fc.size() + rc.size() > 30) {
            out.verdict = Verdict::Indeterminate;
            return out;
        }
        try {
            for (std::uint32_t fm : masks_by_size(fc.size())) {
                for (std::uint32_t rm : masks_by_size(rc.size())) {
                    std::vector<std::size_t> F{0}, R{k};
                    for (std::size_t i = 0; i < fc.size(); ++i)
                        if (fm >> i & 1) F.push_back(fc[i]);
                    for (std::size_t i = rc.size(); i-- > 0;)
                        if (rm >> i & 1) R.push_back(rc[i]);
                    if (auto d = search_breakpoints(F, R, out.decompositions)) {
                        out.verdict = Verdict::Accepted;
                        out.witness = std::move(d);
                        return out;
                    }
                }
            }
        } catch (const BudgetExceeded&) {
            out.verdict = Verdict::Indeterminate;
        }
        return out;
    }

    void load(const Walk& walk) {
        u_ = walk_vertices(g_, walk);
        edges_ = walk.edges;
    }

    // Evaluates clauses (ii)-(v) for fixed anchors and breakpoints.
    std::optional<Decomposition> evaluate(const std::vector<std::size_t>& F, const std::vector<std::size_t>& R,
                                          const std::vector<std::size_t>& B) {
        const std::size_t k = edges_.size();
        const std::size_t L = scope_.level_count();
        std::vector<bool> in_b(k + 1, false), fwd(k + 1, false), rev(k + 1, false);
        for (auto b : B) in_b[b] = true;
        for (std::size_t i = 1; i < F.size(); ++i) fwd[F[i]] = true;
        for (std::size_t i = 1; i < R.size(); ++i) rev[R[i]] = true;
        auto hits = [](const std::vector<bool>& mask, std::size_t lo, std::size_t hi) {
            for (std::size_t x = lo; x <= hi; ++x)
                if (mask[x]) return true;
            return false;
        };

        Decomposition d;
        d.forward = F;
        d.reverse = R;
        d.breakpoints = B;
        d.forward_state = {DrawVector::zero(L)};
        d.reverse_state = {DrawVector::zero(L)};
        d.forward_omega = {std::nullopt};
        d.reverse_omega = {std::nullopt};
        for (std::size_t i = 1; i < F.size(); ++i) {
            std::optional<DrawVector> omega;
            if (!hits(in_b, F[i - 1], F[i])) {
                const auto& o = oracle(u_[F[i - 1]], true, d.forward_state[i - 1]);
                if (o.distance(u_[F[i]]) < kInf) omega = o.draw(u_[F[i]]);
            }
            const auto& rec = obstruction(Side::ForTarget, u_[F[i]], omega);
            if (!rec) return std::nullopt;
            d.forward_state.push_back(rec->state);
            d.forward_omega.push_back(omega);
        }
        for (std::size_t i = 1; i < R.size(); ++i) {
            std::optional<DrawVector> omega;
            if (!hits(in_b, R[i], R[i - 1])) {
                const auto& o = oracle(u_[R[i - 1]], false, d.reverse_state[i - 1]);
                if (o.distance(u_[R[i]]) < kInf) omega = o.draw(u_[R[i]]);
            }
            const auto& rec = obstruction(Side::ForStart, u_[R[i]], omega);
            if (!rec) return std::nullopt;
            d.reverse_state.push_back(rec->state);
            d.reverse_omega.push_back(omega);
        }
        for (std::size_t m = 0; m < k; ++m) {
            const Level l = scope_.level(edges_[m]);
            if (l == scope_.top()) continue;
            bool ok = false;
            for (std::size_t i = 0; i < F.size() && !ok && F[i] <= m; ++i) {
                if (hits(in_b, F[i], m) || hits(rev, F[i], m)) continue;
                const auto& o = oracle(u_[F[i]], true, d.forward_state[i]);
                ok = o.distance(u_[m]) < kInf && o.draw(u_[m])[l] <= scope_.nu(l);
            }
            for (std::size_t i = 0; i < R.size() && !ok && R[i] >= m + 1; ++i) {
                if (hits(in_b, m + 1, R[i]) || hits(fwd, m + 1, R[i])) continue;
                const auto& o = oracle(u_[R[i]], false, d.reverse_state[i]);
                ok = o.distance(u_[m + 1]) < kInf && o.draw(u_[m + 1])[l] <= scope_.nu(l);
            }
            if (!ok) return std::nullopt;
        }
        return d;
    }

private:
    // One breakpoint in [a, c] for every forward anchor a directly followed by
    // a reverse anchor c (forward first on equal positions).
    std::optional<Decomposition> search_breakpoints(const std::vector<std::size_t>& F,
                                                    const std::vector<std::size_t>& R, std::size_t& evaluated) {
        std::vector<std::pair<std::size_t, int>> merged;
        for (auto a : F) merged.emplace_back(a, 0);
        for (auto c : R) merged.emplace_back(c, 1);
        std::sort(merged.begin(), merged.end());
        std::vector<std::pair<std::size_t, std::size_t>> gaps;
        for (std::size_t i = 0; i + 1 < merged.size(); ++i)
            if (merged[i].second == 0 && merged[i + 1].second == 1)
                gaps.emplace_back(merged[i].first, merged[i + 1].first);
        std::vector<std::size_t> B(gaps.size());
        std::function<std::optional<Decomposition>(std::size_t)> pick =
            [&](std::size_t j) -> std::optional<Decomposition> {
            if (j == gaps.size()) {
                if (++evaluated > options_.decomposition_budget) throw BudgetExceeded("decomposition budget exceeded");
                return evaluate(F, R, B);
            }
            for (std::size_t b = gaps[j].first; b <= gaps[j].second; ++b) {
                B[j] = b;
                if (auto d = pick(j + 1)) return d;
            }
            return std::nullopt;
        };
        return pick(0);
    }

    const AdmissibilityOracle& oracle(VertexId root, bool forward, const DrawVector& initial) {
        auto key = std::make_tuple(root, forward, key_of(initial));
        auto it = oracles_.find(key);
        if (it == oracles_.end()) {
            OracleOptions o;
            o.direction = forward ? Direction::Forward : Direction::Reverse;
            o.initial = initial;
            auto a = std::make_unique<AdmissibilityOracle>(g_, scope_, root, o);
            if (!a->complete()) throw BudgetExceeded("admissibility enumeration budget exceeded");
            it = oracles_.emplace(key, std::move(a)).first;
        }
        return *it->second;
    }

    const std::optional<ObstructionRecord>& obstruction(Side side, VertexId d, const std::optional<DrawVector>& omega) {
        std::optional<std::vector<double>> ok;
        if (omega) ok = key_of(*omega);
        auto key = std::make_tuple(side, d, ok);
        auto it = obstructions_.find(key);
        if (it == obstructions_.end()) {
            const bool for_target = side == Side::ForTarget;
            const VertexId root = for_target ? t_ : s_;
            std::optional<ObstructionRecord> rec;
            if (d != root) {
                rec = detail::enumerate_obstructed(g_, scope_, blocked_,
                                                   for_target ? reverse_admissible_ : forward_admissible_, side, d,
                                                   root, omega, budget_);
            }
            it = obstructions_.emplace(key, std::move(rec)).first;
        }
        return it->second;
    }

    const RoadNetwork& g_;
    const ScopeMapping& scope_;
    VertexId s_, t_;
    FullOptions options_;
    std::size_t budget_;
    std::vector<bool> blocked_;
    bool any_blocked_ = false;
    std::vector<bool> forward_admissible_, reverse_admissible_;
    std::vector<bool> may_target_, may_start_;
    std::vector<VertexId> u_;
    std::vector<EdgeId> edges_;
    std::map<std::tuple<VertexId, bool, std::vector<double>>, std::unique_ptr<AdmissibilityOracle>> oracles_;
    std::map<std::tuple<Side, VertexId, std::optional<std::vector<double>>>, std::optional<ObstructionRecord>>
        obstructions_;
};

bool well_formed(const Decomposition& d, std::size_t k) {
    const auto& F = d.forward;
    const auto& R = d.reverse;
    if (F.empty() || F[0] != 0 || R.empty() || R[0] != k) return false;
    for (std::size_t i = 1; i < F.size(); ++i)
        if (!(F[i - 1] < F[i] && F[i] < k)) return false;
    for (std::size_t i = 1; i < R.size(); ++i)
        if (!(R[i - 1] > R[i] && R[i] > 0)) return false;
    std::vector<std::pair<std::size_t, int>> merged;
    for (auto a : F) merged.emplace_back(a, 0);
    for (auto c : R) merged.emplace_back(c, 1);
    std::sort(merged.begin(), merged.end());
    std::size_t gaps = 0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        if (!(merged[i].second == 0 && merged[i + 1].second == 1)) continue;
        const auto lo = merged[i].first, hi = merged[i + 1].first;
        ++gaps;
        if (std::count_if(d.breakpoints.begin(), d.breakpoints.end(),
                          [&](std::size_t b) { return lo <= b && b <= hi; }) != 1)
            return false;
    }
    return gaps == d.breakpoints.size();
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Accepted: return "accepted";
        case Verdict::Rejected: return "rejected";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

FullVerdict validate_full_detour(const RoadNetwork& network, const ScopeMapping& scope,
                                 const ClosureSet& closures, const Walk& walk, VertexId s, VertexId t,
                                 const FullOptions& options) {
    Checker c(network, scope, closures, s, t, options);
    return c.validate(walk);
}

bool check_decomposition(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                         const Walk& walk, VertexId s, VertexId t, const Decomposition& decomposition) {
    check_walk(network, walk);
    if (walk.start != s || walk_end(network, walk) != t) return false;
    for (EdgeId e : walk.edges)
        if (closures.blocks(e)) return false;
    if (!well_formed(decomposition, walk.size())) return false;
    Checker c(network, scope, closures, s, t, {});
    c.load(walk);
    auto d = c.evaluate(decomposition.forward, decomposition.reverse, decomposition.breakpoints);
    return d && *d == decomposition;
}

FullOptimum brute_force_full_optimum(const RoadNetwork& network, const ScopeMapping& scope,
                                     const ClosureSet& closures, VertexId s, VertexId t, std::size_t hop_bound,
                                     std::size_t walk_budget, const FullOptions& options) {
    Checker checker(network, scope, closures, s, t, options);
    const auto blocked = closures.blocking_mask();
    FullOptimum best;
    double undecided = kInf;
    std::size_t visited = 0;
    bool exhausted = false;
    Walk w{s, {}};
    std::function<void(VertexId, double)> dfs = [&](VertexId x, double cost) {
        if (exhausted) return;
        if (++visited > walk_budget) {
            exhausted = true;
            return;
        }
        if (x == t && cost < best.cost) {
            ++best.walks;
            auto v = checker.validate(w);
            if (v.accepted()) {
                best.cost = cost;
                best.walk = w;
                best.witness = std::move(v.witness);
            } else if (v.verdict == Verdict::Indeterminate) {
                undecided = std::min(undecided, cost);
            }
        }
        if (w.size() >= hop_bound) return;
        for (EdgeId e : network.out_edges(x)) {
            if (blocked[e]) continue;
            const double nc = cost + network.weight(e, Weighting::Updated);
            if (!(nc < best.cost)) continue;
            w.edges.push_back(e);
            dfs(network.edge(e).head, nc);
            w.edges.pop_back();
        }
    };
    dfs(s, 0.0);
    if (exhausted || undecided < best.cost) {
        best.status = BruteStatus::BudgetExceeded;
    } else {
        best.status = best.cost < kInf ? BruteStatus::Found : BruteStatus::Unreachable;
    }
    return best;
}

}  // namespace scope
