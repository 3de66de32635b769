#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scope {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Level = std::uint8_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

/// Raised for any malformed input handed to the library (bad ids, negative
/// weights, invalid scope tables, walks that do not chain).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an enumerative oracle runs out of its work budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Weighting { Base, Updated };

struct EdgeSpec {
    VertexId tail = 0;
    VertexId head = 0;
    double weight = 0.0;
};

struct Edge {
    VertexId tail = 0;
    VertexId head = 0;
    double weight = 0.0;          // w
    double updated_weight = 0.0;  // w*, >= w, may be kInf
};

/// Directed multigraph with a base weighting w and an updated weighting w*.
/// Edge ids are stable and follow insertion order. Immutable once built;
/// weight updates produce a new network.
class RoadNetwork {
public:
    RoadNetwork() = default;
    RoadNetwork(std::size_t vertex_count, std::span<const EdgeSpec> edges);

    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edges_.size(); }

    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    std::span<const Edge> edges() const { return edges_; }

    double weight(EdgeId e, Weighting which = Weighting::Base) const {
        const Edge& ed = edges_[e];
        return which == Weighting::Base ? ed.weight : ed.updated_weight;
    }

    std::span<const EdgeId> out_edges(VertexId v) const {
        return {out_ids_.data() + out_offset_[v], out_ids_.data() + out_offset_[v + 1]};
    }
    std::span<const EdgeId> in_edges(VertexId v) const {
        return {in_ids_.data() + in_offset_[v], in_ids_.data() + in_offset_[v + 1]};
    }

    /// Copy with w* replaced. Requires updated[e] >= w(e) for every edge.
    RoadNetwork with_updated_weights(std::span<const double> updated) const;
    /// Copy with w* reset to w.
    RoadNetwork without_updates() const;

    bool has_updates() const;

    friend bool operator==(const RoadNetwork& a, const RoadNetwork& b);

private:
    void build_adjacency();

    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> out_offset_{0};
    std::vector<EdgeId> out_ids_;
    std::vector<std::uint32_t> in_offset_{0};
    std::vector<EdgeId> in_ids_;

    friend RoadNetwork reverse(const RoadNetwork& network);
};

RoadNetwork build_network(std::size_t vertex_count, std::span<const EdgeSpec> edges);

/// Every edge (u,v) becomes (v,u) with the same id and weights.
RoadNetwork reverse(const RoadNetwork& network);

/// Per-edge scope level plus per-level scope value nu. Levels are dense
/// ordinals 0..top(); top() encodes the unbounded level and has nu = inf.
/// The original level labels are kept for reporting.
class ScopeMapping {
public:
    ScopeMapping() = default;
    ScopeMapping(std::vector<Level> edge_levels, std::vector<double> nu,
                 std::vector<std::string> labels = {});

    std::size_t level_count() const { return nu_.size(); }
    Level top() const { return static_cast<Level>(nu_.size() - 1); }
    Level level(EdgeId e) const { return levels_[e]; }
    double nu(Level l) const { return nu_[l]; }
    bool unbounded(EdgeId e) const { return levels_[e] == top(); }

    std::span<const Level> levels() const { return levels_; }
    std::span<const double> nus() const { return nu_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t edge_count() const { return levels_.size(); }

    ScopeMapping with_levels(std::vector<Level> edge_levels) const;

    friend bool operator==(const ScopeMapping&, const ScopeMapping&) = default;

private:
    std::vector<Level> levels_;
    std::vector<double> nu_;
    std::vector<std::string> labels_;
};

/// Throws InvalidInput unless: nu_0 >= 0, nu strictly increasing, nu_top = inf,
/// every edge level is a declared level, and the mapping covers every edge.
void validate_scope_mapping(const ScopeMapping& scope, const RoadNetwork& network);

/// Per-level vector indexed like ScopeMapping levels (S-draw values, initial
/// and final amendment vectors, obstruction states).
class DrawVector {
public:
    DrawVector() = default;
    explicit DrawVector(std::size_t levels, double fill = 0.0) : v_(levels, fill) {}
    explicit DrawVector(std::vector<double> values) : v_(std::move(values)) {}

    static DrawVector zero(std::size_t levels) { return DrawVector(levels, 0.0); }
    static DrawVector infinite(std::size_t levels) { return DrawVector(levels, kInf); }

    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t l) const { return v_[l]; }
    double& operator[](std::size_t l) { return v_[l]; }
    std::span<const double> values() const { return v_; }

    DrawVector& operator+=(const DrawVector& o);
    friend DrawVector operator+(DrawVector a, const DrawVector& b) { return a += b; }
    /// Component-wise minimum.
    DrawVector& min_with(const DrawVector& o);
    bool is_finite() const;

    friend bool operator==(const DrawVector&, const DrawVector&) = default;

private:
    std::vector<double> v_;
};

/// Draw contribution of a single edge: gamma_l = w(f) if S(f) > l, else 0.
void add_edge_draw(DrawVector& sigma, Level edge_level, double w);

/// Alternating vertex/edge sequence, stored as start vertex + edge ids.
struct Walk {
    VertexId start = kNoVertex;
    std::vector<EdgeId> edges;

    bool empty() const { return edges.empty(); }
    std::size_t size() const { return edges.size(); }
    friend bool operator==(const Walk&, const Walk&) = default;
};

/// Throws InvalidInput if an edge id is unknown or consecutive edges do not chain.
void check_walk(const RoadNetwork& network, const Walk& walk);
/// u_0..u_k.
std::vector<VertexId> walk_vertices(const RoadNetwork& network, const Walk& walk);
VertexId walk_end(const RoadNetwork& network, const Walk& walk);
double walk_weight(const RoadNetwork& network, const Walk& walk,
                   Weighting which = Weighting::Base);
/// Walk read in the reversed network: same edge ids, reversed order, starting at the old end.
Walk reversed_walk(const RoadNetwork& network, const Walk& walk);

/// sigma_l = sum of w(f) over walk edges f with S(f) > l.
DrawVector s_draw(const RoadNetwork& network, const ScopeMapping& scope, const Walk& walk,
                  Weighting which = Weighting::Base);

/// For every ordered pair of edges (e, f) of the subgraph (f may equal e)
/// there is a walk of length >= 2 starting with e and ending with f. Decided
/// via strongly connected components of the vertex graph.
bool is_routing_connected(const RoadNetwork& network);
bool is_routing_connected(const RoadNetwork& network,
                          const std::function<bool(EdgeId)>& keep);

/// G routing-connected and every level subgraph G^[i] (edges with S >= i)
/// nonempty and routing-connected.
bool is_proper(const RoadNetwork& network, const ScopeMapping& scope);

/// Raises edge levels until is_proper holds. Deterministic; never lowers a
/// level. Throws InvalidInput if the network is not routing-connected.
ScopeMapping balance_to_proper(const RoadNetwork& network, const ScopeMapping& scope);

struct ContractionResult {
    RoadNetwork network;
    ScopeMapping scope;
    /// old vertex -> new vertex, kNoVertex for contracted interior vertices.
    std::vector<VertexId> vertex_map;
    /// new vertex -> old vertex.
    std::vector<VertexId> original_vertex;
    /// new edge -> original edge sequence it replaces.
    std::vector<std::vector<EdgeId>> expansion;

    Walk expand(const Walk& contracted) const;
};

/// Replaces maximal chains through interior vertices of in/out degree 1
/// (or two-way interior vertices with exactly two neighbours) by single
/// edges. Weight is the chain sum (both w and w*), level is the chain minimum.
ContractionResult contract_degree2_chains(const RoadNetwork& network, const ScopeMapping& scope);

/// Strongly connected component id per vertex (Tarjan, iterative), restricted
/// to edges accepted by `keep`.
std::vector<std::uint32_t> strong_components(const RoadNetwork& network,
                                             const std::function<bool(EdgeId)>& keep,
                                             std::uint32_t* component_count = nullptr);

}  // namespace scope
