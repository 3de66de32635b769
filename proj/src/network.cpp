#include "scope/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <utility>

namespace scope {

namespace {

void csr(std::size_t n, std::span<const Edge> edges, bool by_tail,
         std::vector<std::uint32_t>& offset, std::vector<EdgeId>& ids) {
    offset.assign(n + 1, 0);
    for (const Edge& e : edges) ++offset[(by_tail ? e.tail : e.head) + 1];
    for (std::size_t v = 0; v < n; ++v) offset[v + 1] += offset[v];
    ids.assign(edges.size(), 0);
    std::vector<std::uint32_t> fill(offset.begin(), offset.end() - 1);
    for (EdgeId id = 0; id < edges.size(); ++id) {
        const Edge& e = edges[id];
        ids[fill[by_tail ? e.tail : e.head]++] = id;
    }
}

}  // namespace

RoadNetwork::RoadNetwork(std::size_t vertex_count, std::span<const EdgeSpec> edges)
    : vertex_count_(vertex_count) {
    edges_.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const EdgeSpec& s = edges[i];
        if (s.tail >= vertex_count || s.head >= vertex_count) {
            std::ostringstream os;
            os << "edge " << i << " (" << s.tail << "," << s.head
               << ") references a vertex outside 0.." << vertex_count;
            throw InvalidInput(os.str());
        }
        if (!(s.weight >= 0.0) || std::isinf(s.weight)) {
            std::ostringstream os;
            os << "edge " << i << " has invalid weight " << s.weight;
            throw InvalidInput(os.str());
        }
        edges_.push_back({s.tail, s.head, s.weight, s.weight});
    }
    build_adjacency();
}

void RoadNetwork::build_adjacency() {
    csr(vertex_count_, edges_, true, out_offset_, out_ids_);
    csr(vertex_count_, edges_, false, in_offset_, in_ids_);
}

RoadNetwork RoadNetwork::with_updated_weights(std::span<const double> updated) const {
    if (updated.size() != edges_.size()) throw InvalidInput("updated weighting size mismatch");
    RoadNetwork copy = *this;
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        if (!(updated[e] >= edges_[e].weight)) {
            std::ostringstream os;
            os << "edge " << e << ": updated weight " << updated[e] << " below base weight "
               << edges_[e].weight;
            throw InvalidInput(os.str());
        }
        copy.edges_[e].updated_weight = updated[e];
    }
    return copy;
}

RoadNetwork RoadNetwork::without_updates() const {
    RoadNetwork copy = *this;
    for (Edge& e : copy.edges_) e.updated_weight = e.weight;
    return copy;
}

bool RoadNetwork::has_updates() const {
    return std::any_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.updated_weight != e.weight; });
}

bool operator==(const RoadNetwork& a, const RoadNetwork& b) {
    if (a.vertex_count_ != b.vertex_count_ || a.edges_.size() != b.edges_.size()) return false;
    for (std::size_t i = 0; i < a.edges_.size(); ++i) {
        const Edge& x = a.edges_[i];
        const Edge& y = b.edges_[i];
        if (x.tail != y.tail || x.head != y.head || x.weight != y.weight ||
            x.updated_weight != y.updated_weight)
            return false;
    }
    return true;
}

RoadNetwork build_network(std::size_t vertex_count, std::span<const EdgeSpec> edges) {
    return RoadNetwork(vertex_count, edges);
}

RoadNetwork reverse(const RoadNetwork& network) {
    RoadNetwork r = network;
    for (Edge& e : r.edges_) std::swap(e.tail, e.head);
    std::swap(r.out_offset_, r.in_offset_);
    std::swap(r.out_ids_, r.in_ids_);
    return r;
}

// ---------------------------------------------------------------------------

ScopeMapping::ScopeMapping(std::vector<Level> edge_levels, std::vector<double> nu,
                           std::vector<std::string> labels)
    : levels_(std::move(edge_levels)), nu_(std::move(nu)), labels_(std::move(labels)) {
    if (nu_.size() < 2) throw InvalidInput("scope mapping needs at least levels 0 and inf");
    if (nu_.size() > 16) throw InvalidInput("at most 16 scope levels are supported");
    if (labels_.empty()) {
        for (std::size_t l = 0; l + 1 < nu_.size(); ++l) labels_.push_back(std::to_string(l));
        labels_.push_back("inf");
    }
    if (labels_.size() != nu_.size()) throw InvalidInput("scope label count differs from nu count");
    if (!(nu_.front() >= 0.0)) throw InvalidInput("nu_0 must be non-negative");
    if (!std::isinf(nu_.back())) throw InvalidInput("nu of the top level must be inf");
    for (std::size_t l = 1; l < nu_.size(); ++l) {
        if (!(nu_[l] > nu_[l - 1])) {
            std::ostringstream os;
            os << "scope values must be strictly increasing (nu_" << l - 1 << " = " << nu_[l - 1]
               << ", nu_" << l << " = " << nu_[l] << ")";
            throw InvalidInput(os.str());
        }
    }
    for (std::size_t e = 0; e < levels_.size(); ++e) {
        if (levels_[e] >= nu_.size()) {
            std::ostringstream os;
            os << "edge " << e << " has undeclared scope level " << int(levels_[e]);
            throw InvalidInput(os.str());
        }
    }
}

ScopeMapping ScopeMapping::with_levels(std::vector<Level> edge_levels) const {
    return ScopeMapping(std::move(edge_levels), nu_, labels_);
}

void validate_scope_mapping(const ScopeMapping& scope, const RoadNetwork& network) {
    if (scope.level_count() < 2) throw InvalidInput("scope mapping is empty");
    if (scope.edge_count() != network.edge_count())
        throw InvalidInput("scope mapping does not cover every edge");
    // The constructor already enforces the remaining invariants; re-check in
    // case the mapping was default-constructed and filled some other way.
    ScopeMapping recheck(std::vector<Level>(scope.levels().begin(), scope.levels().end()),
                         std::vector<double>(scope.nus().begin(), scope.nus().end()),
                         scope.labels());
    (void)recheck;
}

// ---------------------------------------------------------------------------

DrawVector& DrawVector::operator+=(const DrawVector& o) {
    for (std::size_t l = 0; l < v_.size(); ++l) v_[l] += o.v_[l];
    return *this;
}

DrawVector& DrawVector::min_with(const DrawVector& o) {
    for (std::size_t l = 0; l < v_.size(); ++l) v_[l] = std::min(v_[l], o.v_[l]);
    return *this;
}

bool DrawVector::is_finite() const {
    return std::all_of(v_.begin(), v_.end(), [](double x) { return !std::isinf(x); });
}

void add_edge_draw(DrawVector& sigma, Level edge_level, double w) {
    for (std::size_t l = 0; l < edge_level && l < sigma.size(); ++l) sigma[l] += w;
}

// ---------------------------------------------------------------------------

void check_walk(const RoadNetwork& network, const Walk& walk) {
    if (walk.start >= network.vertex_count()) throw InvalidInput("walk starts at unknown vertex");
    VertexId at = walk.start;
    for (std::size_t i = 0; i < walk.edges.size(); ++i) {
        EdgeId e = walk.edges[i];
        if (e >= network.edge_count()) {
            std::ostringstream os;
            os << "walk references unknown edge " << e;
            throw InvalidInput(os.str());
        }
        if (network.edge(e).tail != at) {
            std::ostringstream os;
            os << "walk edge " << i << " (id " << e << ") does not leave vertex " << at;
            throw InvalidInput(os.str());
        }
        at = network.edge(e).head;
    }
}

std::vector<VertexId> walk_vertices(const RoadNetwork& network, const Walk& walk) {
    std::vector<VertexId> out;
    out.reserve(walk.edges.size() + 1);
    out.push_back(walk.start);
    for (EdgeId e : walk.edges) out.push_back(network.edge(e).head);
    return out;
}

VertexId walk_end(const RoadNetwork& network, const Walk& walk) {
    return walk.edges.empty() ? walk.start : network.edge(walk.edges.back()).head;
}

double walk_weight(const RoadNetwork& network, const Walk& walk, Weighting which) {
    double sum = 0.0;
    for (EdgeId e : walk.edges) sum += network.weight(e, which);
    return sum;
}

Walk reversed_walk(const RoadNetwork& network, const Walk& walk) {
    Walk r;
    r.start = walk_end(network, walk);
    r.edges.assign(walk.edges.rbegin(), walk.edges.rend());
    return r;
}

DrawVector s_draw(const RoadNetwork& network, const ScopeMapping& scope, const Walk& walk,
                  Weighting which) {
    check_walk(network, walk);
    DrawVector sigma = DrawVector::zero(scope.level_count());
    for (EdgeId e : walk.edges) add_edge_draw(sigma, scope.level(e), network.weight(e, which));
    return sigma;
}

// ---------------------------------------------------------------------------

std::vector<std::uint32_t> strong_components(const RoadNetwork& network,
                                             const std::function<bool(EdgeId)>& keep,
                                             std::uint32_t* component_count) {
    const std::size_t n = network.vertex_count();
    constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();
    std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<VertexId> stack;
    std::vector<std::pair<VertexId, std::size_t>> call;  // vertex, next out-edge position
    std::uint32_t counter = 0, ncomp = 0;

    for (VertexId root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            auto out = network.out_edges(v);
            if (pos < out.size()) {
                EdgeId e = out[pos++];
                if (!keep(e)) continue;
                VertexId w = network.edge(e).head;
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                VertexId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            VertexId finished = v;
            call.pop_back();
            if (!call.empty()) {
                VertexId parent = call.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
        }
    }
    if (component_count) *component_count = ncomp;
    return comp;
}

bool is_routing_connected(const RoadNetwork& network, const std::function<bool(EdgeId)>& keep) {
    auto comp = strong_components(network, keep);
    std::uint32_t the_component = std::numeric_limits<std::uint32_t>::max();
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        if (!keep(e)) continue;
        const Edge& ed = network.edge(e);
        // e -> f walks for all f (including e itself) exist iff every kept edge
        // lies inside one strongly connected component.
        if (comp[ed.tail] != comp[ed.head]) return false;
        if (the_component == std::numeric_limits<std::uint32_t>::max()) the_component = comp[ed.tail];
        if (comp[ed.tail] != the_component) return false;
    }
    return true;
}

bool is_routing_connected(const RoadNetwork& network) {
    return is_routing_connected(network, [](EdgeId) { return true; });
}

bool is_proper(const RoadNetwork& network, const ScopeMapping& scope) {
    if (scope.edge_count() != network.edge_count()) return false;
    if (!is_routing_connected(network)) return false;
    if (network.edge_count() == 0) return true;
    for (std::size_t i = 0; i < scope.level_count(); ++i) {
        auto keep = [&](EdgeId e) { return scope.level(e) >= i; };
        bool any = false;
        for (EdgeId e = 0; e < network.edge_count() && !any; ++e) any = keep(e);
        if (!any) return false;
        if (!is_routing_connected(network, keep)) return false;
    }
    return true;
}

namespace {

/// Shortest path (by base weight) from any vertex in `sources` to `target`;
/// returns edge ids in walk order, or nullopt-like empty + false.
bool shortest_connection(const RoadNetwork& net, const std::vector<bool>& sources,
                         const std::function<bool(VertexId)>& is_target,
                         std::vector<EdgeId>& path) {
    const std::size_t n = net.vertex_count();
    std::vector<double> dist(n, kInf);
    std::vector<EdgeId> pred(n, kNoEdge);
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (VertexId v = 0; v < n; ++v) {
        if (sources[v]) {
            dist[v] = 0;
            pq.emplace(0.0, v);
        }
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        if (is_target(u) && !sources[u]) {
            path.clear();
            for (VertexId x = u; pred[x] != kNoEdge; x = net.edge(pred[x]).tail)
                path.push_back(pred[x]);
            std::reverse(path.begin(), path.end());
            return true;
        }
        for (EdgeId e : net.out_edges(u)) {
            VertexId v = net.edge(e).head;
            double nd = d + net.weight(e);
            if (nd < dist[v]) {
                dist[v] = nd;
                pred[v] = e;
                pq.emplace(nd, v);
            }
        }
    }
    return false;
}

}  // namespace

ScopeMapping balance_to_proper(const RoadNetwork& network, const ScopeMapping& scope) {
    validate_scope_mapping(scope, network);
    if (!is_routing_connected(network))
        throw InvalidInput("network is not routing-connected; no proper scope mapping exists");
    std::vector<Level> level(scope.levels().begin(), scope.levels().end());
    if (network.edge_count() == 0) return scope;
    const std::size_t n = network.vertex_count();

    for (int i = static_cast<int>(scope.top()); i >= 1; --i) {
        const Level li = static_cast<Level>(i);
        auto keep = [&](EdgeId e) { return level[e] >= li; };
        bool any = false;
        for (EdgeId e = 0; e < network.edge_count() && !any; ++e) any = keep(e);
        if (!any) {
            // Seed the level with a shortest cycle through edge 0.
            const Edge& e0 = network.edge(0);
            level[0] = li;
            if (e0.tail != e0.head) {
                std::vector<bool> src(n, false);
                src[e0.head] = true;
                std::vector<EdgeId> path;
                VertexId back = e0.tail;
                shortest_connection(network, src, [&](VertexId v) { return v == back; }, path);
                for (EdgeId e : path) level[e] = std::max(level[e], li);
            }
        }
        while (true) {
            std::uint32_t ncomp = 0;
            auto comp = strong_components(network, keep, &ncomp);
            // Core: component holding the most internal edges of this level.
            std::vector<std::size_t> internal(ncomp, 0);
            std::vector<bool> incident(n, false);
            for (EdgeId e = 0; e < network.edge_count(); ++e) {
                if (!keep(e)) continue;
                const Edge& ed = network.edge(e);
                incident[ed.tail] = incident[ed.head] = true;
                if (comp[ed.tail] == comp[ed.head]) ++internal[comp[ed.tail]];
            }
            std::uint32_t core = 0;
            std::size_t best = 0;
            std::vector<VertexId> first_vertex(ncomp, kNoVertex);
            for (VertexId v = 0; v < n; ++v)
                if (first_vertex[comp[v]] == kNoVertex) first_vertex[comp[v]] = v;
            bool have = false;
            for (VertexId v = 0; v < n; ++v) {
                std::uint32_t c = comp[v];
                if (first_vertex[c] != v || !incident[v]) continue;
                if (!have || internal[c] > best) {
                    core = c;
                    best = internal[c];
                    have = true;
                }
            }
            VertexId outsider = kNoVertex;
            for (VertexId v = 0; v < n && outsider == kNoVertex; ++v)
                if (incident[v] && comp[v] != core) outsider = v;
            bool edges_internal = true;
            for (EdgeId e = 0; e < network.edge_count() && edges_internal; ++e) {
                if (!keep(e)) continue;
                const Edge& ed = network.edge(e);
                edges_internal = comp[ed.tail] == core && comp[ed.head] == core;
            }
            if (outsider == kNoVertex && edges_internal) break;

            std::vector<bool> in_core(n, false);
            for (VertexId v = 0; v < n; ++v) in_core[v] = incident[v] && comp[v] == core;
            std::vector<EdgeId> to_x, from_x;
            std::vector<bool> src_x(n, false);
            src_x[outsider] = true;
            bool ok = shortest_connection(network, in_core,
                                          [&](VertexId v) { return v == outsider; }, to_x) &&
                      shortest_connection(network, src_x,
                                          [&](VertexId v) { return in_core[v]; }, from_x);
            if (!ok) throw InvalidInput("balance_to_proper: network lost routing connectivity");
            for (EdgeId e : to_x) level[e] = std::max(level[e], li);
            for (EdgeId e : from_x) level[e] = std::max(level[e], li);
        }
    }
    return scope.with_levels(std::move(level));
}

// ---------------------------------------------------------------------------

Walk ContractionResult::expand(const Walk& contracted) const {
    Walk out;
    out.start = contracted.start == kNoVertex ? kNoVertex : original_vertex.at(contracted.start);
    for (EdgeId e : contracted.edges) {
        const auto& seq = expansion.at(e);
        out.edges.insert(out.edges.end(), seq.begin(), seq.end());
    }
    return out;
}

ContractionResult contract_degree2_chains(const RoadNetwork& network, const ScopeMapping& scope) {
    struct Work {
        VertexId tail, head;
        double w, wstar;
        Level level;
        bool alive;
        std::vector<EdgeId> orig;
    };
    const std::size_t n = network.vertex_count();
    std::vector<Work> work;
    work.reserve(network.edge_count());
    std::vector<std::vector<std::size_t>> out(n), in(n);
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        const Edge& ed = network.edge(e);
        work.push_back({ed.tail, ed.head, ed.weight, ed.updated_weight, scope.level(e), true, {e}});
        out[ed.tail].push_back(e);
        in[ed.head].push_back(e);
    }
    auto alive_of = [&](std::vector<std::size_t>& list) {
        std::erase_if(list, [&](std::size_t i) { return !work[i].alive; });
        return list;
    };
    auto splice = [&](std::size_t a, std::size_t b) {
        // a = (x, v), b = (v, y)  ->  (x, y)
        Work merged{work[a].tail,
                    work[b].head,
                    work[a].w + work[b].w,
                    work[a].wstar + work[b].wstar,
                    std::min(work[a].level, work[b].level),
                    true,
                    work[a].orig};
        merged.orig.insert(merged.orig.end(), work[b].orig.begin(), work[b].orig.end());
        work[a].alive = work[b].alive = false;
        std::size_t id = work.size();
        out[merged.tail].push_back(id);
        in[merged.head].push_back(id);
        work.push_back(std::move(merged));
    };

    std::vector<bool> removed(n, false);
    for (VertexId v = 0; v < n; ++v) {
        auto o = alive_of(out[v]);
        auto i = alive_of(in[v]);
        auto self = [&](std::size_t id) { return work[id].tail == work[id].head; };
        if (o.size() == 1 && i.size() == 1 && !self(o[0]) && !self(i[0]) &&
            work[i[0]].tail != work[o[0]].head) {
            splice(i[0], o[0]);
            removed[v] = true;
            continue;
        }
        if (o.size() == 2 && i.size() == 2 && !self(o[0]) && !self(o[1]) && !self(i[0]) &&
            !self(i[1])) {
            VertexId a = work[i[0]].tail, b = work[i[1]].tail;
            if (a == b) continue;
            std::size_t out_a = o[0], out_b = o[1];
            if (work[out_a].head == b && work[out_b].head == a) std::swap(out_a, out_b);
            if (work[out_a].head != a || work[out_b].head != b) continue;
            splice(i[0], out_b);  // a -> v -> b
            splice(i[1], out_a);  // b -> v -> a
            removed[v] = true;
        }
    }

    ContractionResult result;
    result.vertex_map.assign(n, kNoVertex);
    for (VertexId v = 0; v < n; ++v) {
        if (removed[v]) continue;
        result.vertex_map[v] = static_cast<VertexId>(result.original_vertex.size());
        result.original_vertex.push_back(v);
    }
    std::vector<std::size_t> alive;
    for (std::size_t id = 0; id < work.size(); ++id)
        if (work[id].alive) alive.push_back(id);
    std::sort(alive.begin(), alive.end(),
              [&](std::size_t a, std::size_t b) { return work[a].orig.front() < work[b].orig.front(); });

    std::vector<EdgeSpec> specs;
    std::vector<double> wstar;
    std::vector<Level> levels;
    for (std::size_t id : alive) {
        const Work& wk = work[id];
        specs.push_back({result.vertex_map[wk.tail], result.vertex_map[wk.head], wk.w});
        wstar.push_back(wk.wstar);
        levels.push_back(wk.level);
        result.expansion.push_back(wk.orig);
    }
    result.network = RoadNetwork(result.original_vertex.size(), specs).with_updated_weights(wstar);
    result.scope = ScopeMapping(std::move(levels),
                                std::vector<double>(scope.nus().begin(), scope.nus().end()),
                                scope.labels());
    return result;
}

}  // namespace scope
