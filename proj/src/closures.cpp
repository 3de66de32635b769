#include <deque>

#include "scope/detour.hpp"

namespace scope {

ClosureSet ClosureSet::none(std::size_t edge_count) {
    ClosureSet c;
    c.tag.assign(edge_count, ClosureTag::Open);
    c.hard.assign(edge_count, false);
    return c;
}

ClosureSet ClosureSet::of(std::size_t edge_count, const std::vector<EdgeId>& edges) {
    ClosureSet c = none(edge_count);
    for (EdgeId e : edges) {
        if (e >= edge_count) throw InvalidInput("closure edge " + std::to_string(e) + " does not exist");
        c.tag[e] = ClosureTag::Closed;
        c.hard[e] = true;
    }
    return c;
}

std::vector<bool> ClosureSet::blocking_mask() const {
    std::vector<bool> m(tag.size(), false);
    for (EdgeId e = 0; e < tag.size(); ++e) m[e] = blocks(e);
    return m;
}

std::vector<EdgeId> ClosureSet::members() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < tag.size(); ++e)
        if (contains(e)) out.push_back(e);
    return out;
}

std::vector<EdgeId> ClosureSet::blocking() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < tag.size(); ++e)
        if (blocks(e)) out.push_back(e);
    return out;
}

std::size_t ClosureSet::quasi_count() const {
    std::size_t n = 0;
    for (auto t : tag) n += t == ClosureTag::QuasiForTarget || t == ClosureTag::QuasiForStart;
    return n;
}

ClosureSet derive_closures(const RoadNetwork& network) {
    ClosureSet c = ClosureSet::none(network.edge_count());
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        const Edge& ed = network.edge(e);
        if (ed.updated_weight > ed.weight) {
            c.tag[e] = ClosureTag::Closed;
            c.hard[e] = ed.updated_weight == kInf;
        }
    }
    return c;
}

RoadNetwork apply_closures(const RoadNetwork& network, const ClosureSet& closures) {
    if (closures.edge_count() != network.edge_count()) throw InvalidInput("closure set does not match network");
    std::vector<double> ws(network.edge_count());
    for (EdgeId e = 0; e < network.edge_count(); ++e) ws[e] = closures.blocks(e) ? kInf : network.weight(e);
    return network.with_updated_weights(ws);
}

namespace {

std::vector<bool> reachable_from(const RoadNetwork& g, VertexId root, const std::vector<bool>& blocked,
                                 bool forward) {
    std::vector<bool> seen(g.vertex_count(), false);
    std::deque<VertexId> queue{root};
    seen[root] = true;
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (EdgeId e : forward ? g.out_edges(u) : g.in_edges(u)) {
            if (blocked[e]) continue;
            VertexId v = forward ? g.edge(e).head : g.edge(e).tail;
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace

ClosureSet qc_closure(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                      VertexId s, VertexId t) {
    if (closures.edge_count() != network.edge_count()) throw InvalidInput("closure set does not match network");
    if (s >= network.vertex_count() || t >= network.vertex_count()) throw InvalidInput("unknown endpoint");
    validate_scope_mapping(scope, network);
    ClosureSet out = closures;
    std::vector<bool> blocked = out.blocking_mask();
    std::size_t iterations = 0;
    while (true) {
        ++iterations;
        const auto to_t = reachable_from(network, t, blocked, false);
        const auto from_s = reachable_from(network, s, blocked, true);
        bool added = false;
        for (EdgeId e = 0; e < network.edge_count(); ++e) {
            if (blocked[e] || out.tag[e] != ClosureTag::Open) continue;
            const Edge& ed = network.edge(e);
            if (!to_t[ed.head]) {
                out.tag[e] = ClosureTag::QuasiForTarget;
            } else if (!from_s[ed.tail]) {
                out.tag[e] = ClosureTag::QuasiForStart;
            } else {
                continue;
            }
            added = true;
        }
        if (!added) break;
        blocked = out.blocking_mask();
    }
    out.iterations = iterations;
    return out;
}

const char* to_string(DetourClass c) {
    switch (c) {
        case DetourClass::Static: return "static";
        case DetourClass::SimpleDetour: return "simple-detour";
        case DetourClass::EnhancedDetour: return "enhanced-detour";
        case DetourClass::Unreachable: return "unreachable";
    }
    return "?";
}

}  // namespace scope
