#include <limits>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "scope/detour.hpp"

namespace scope {

namespace {

// Search state at a vertex: phase (0 = prefix, 1 = suffix), open permits,
// and pending levels of edges that still need a reverse permit further on.
// Nodes hold the state after the vertex was processed.
struct State {
    VertexId v;
    std::uint8_t phase;
    std::uint16_t permits;
    std::uint16_t pending;
};

std::uint64_t pack(const State& s) {
    return (std::uint64_t(s.v) << 31) | (std::uint64_t(s.phase) << 30) | (std::uint64_t(s.permits & 0x7fff) << 15) |
           std::uint64_t(s.pending & 0x7fff);
}

State unpack(std::uint64_t k) {
    return {VertexId(k >> 31), std::uint8_t((k >> 30) & 1), std::uint16_t((k >> 15) & 0x7fff),
            std::uint16_t(k & 0x7fff)};
}

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

struct Node {
    std::uint64_t key;
    double cost;
    std::uint32_t permit_count;
    std::uint32_t pred;
    EdgeId edge;
    bool permit;
    bool settled;
};

class Frontier {
public:
    explicit Frontier(std::size_t n) : seen_(n, false) {}

    using Item = std::tuple<double, std::uint32_t, VertexId, std::uint64_t>;

    // Returns the node id if the label improved.
    std::uint32_t offer(const State& s, double cost, std::uint32_t permits, std::uint32_t pred, EdgeId e, bool permit) {
        const std::uint64_t k = pack(s);
        auto [it, fresh] = index_.try_emplace(k, std::uint32_t(nodes_.size()));
        if (fresh) {
            nodes_.push_back({k, cost, permits, pred, e, permit, false});
        } else {
            Node& nd = nodes_[it->second];
            if (nd.settled || std::tie(cost, permits) >= std::tie(nd.cost, nd.permit_count)) return kNone;
            nd.cost = cost;
            nd.permit_count = permits;
            nd.pred = pred;
            nd.edge = e;
            nd.permit = permit;
        }
        pq_.emplace(cost, permits, s.v, k);
        return it->second;
    }

    double top() {
        while (!pq_.empty()) {
            auto [c, p, v, k] = pq_.top();
            const Node& nd = nodes_[index_.at(k)];
            if (nd.settled || c > nd.cost || (c == nd.cost && p > nd.permit_count)) {
                pq_.pop();
                continue;
            }
            return c;
        }
        return kInf;
    }

    std::uint32_t pop() {
        top();
        auto [c, p, v, k] = pq_.top();
        pq_.pop();
        const std::uint32_t id = index_.at(k);
        nodes_[id].settled = true;
        if (!seen_[v]) {
            seen_[v] = true;
            ++scanned_;
        }
        return id;
    }

    const Node& node(std::uint32_t id) const { return nodes_[id]; }
    std::size_t scanned() const { return scanned_; }

private:
    std::vector<Node> nodes_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<bool> seen_;
    std::size_t scanned_ = 0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq_;
};

}  // namespace

DetourSearchResult detour_search(const RoadNetwork& network, const DetourContext& c) {
    const std::size_t n = network.vertex_count();
    if (c.s >= n || c.t >= n || c.blocked.size() != network.edge_count())
        throw InvalidInput("detour context does not match network");
    auto bit = [](Level l) { return std::uint16_t(1u << l); };
    auto wstar = [&](EdgeId e) { return network.weight(e, Weighting::Updated); };

    // Single forward run: the suffix phase follows reverse-admissible edges,
    // so every walk is completed from s alone and the first settled node at t
    // without pending edges is optimal.
    Frontier fwd(n);
    fwd.offer({c.s, 0, c.permit_levels[c.s], 0}, 0.0, 0, kNone, kNoEdge, false);

    std::uint32_t goal = kNone;
    while (fwd.top() < kInf) {
        const std::uint32_t id = fwd.pop();
        const Node nd = fwd.node(id);
        const State st = unpack(nd.key);
        if (st.v == c.t && st.pending == 0) {
            goal = id;
            break;
        }
        for (std::uint8_t ph = st.phase; ph <= 1; ++ph) {
            for (EdgeId e : network.out_edges(st.v)) {
                if (c.blocked[e] || !(wstar(e) < kInf)) continue;
                const Level l = c.levels[e];
                const bool by_phase = ph == 0 ? c.forward_admissible[e] : c.reverse_admissible[e];
                std::uint16_t pending = st.pending;
                if (!by_phase && !(l < c.top && (st.permits & bit(l)))) {
                    if (l >= c.top) continue;
                    pending |= bit(l);
                }
                const VertexId v = network.edge(e).head;
                // Process the head: permits expire where an open edge above their
                // level leaves; pending edges are discharged by a reverse
                // obstruction of their level and die where such an edge enters.
                const std::uint16_t permits = std::uint16_t((st.permits & ~c.leave_above[v]) | c.permit_levels[v]);
                pending &= std::uint16_t(~c.reverse_levels[v]);
                if (pending & c.enter_above[v]) continue;
                fwd.offer({v, ph, permits, pending}, nd.cost + wstar(e), nd.permit_count + !by_phase, id, e, !by_phase);
            }
        }
    }

    DetourSearchResult out;
    out.scanned = fwd.scanned();
    if (goal == kNone) return out;
    out.reachable = true;
    out.cost = fwd.node(goal).cost;
    std::vector<EdgeId> edges;
    std::vector<bool> permit;
    for (std::uint32_t id = goal; fwd.node(id).pred != kNone; id = fwd.node(id).pred) {
        edges.push_back(fwd.node(id).edge);
        permit.push_back(fwd.node(id).permit);
    }
    out.walk.start = c.s;
    out.walk.edges.assign(edges.rbegin(), edges.rend());
    out.permit_edges.assign(permit.rbegin(), permit.rend());
    return out;
}

}  // namespace scope
