#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scope/network.hpp"
#include "scope/search.hpp"

namespace scope {

enum class ClosureTag : std::uint8_t { Open, Closed, QuasiForTarget, QuasiForStart };

/// Per-edge closure membership. Closed edges come from a weight increase;
/// only hard ones (w* = inf) block detour searches. Quasi-closures are added
/// by qc_closure and always block.
struct ClosureSet {
    std::vector<ClosureTag> tag;
    std::vector<bool> hard;
    std::size_t iterations = 0;

    static ClosureSet none(std::size_t edge_count);
    /// Hard closures on the given edges.
    static ClosureSet of(std::size_t edge_count, const std::vector<EdgeId>& edges);

    std::size_t edge_count() const { return tag.size(); }
    bool contains(EdgeId e) const { return tag[e] != ClosureTag::Open; }
    bool blocks(EdgeId e) const {
        return tag[e] == ClosureTag::QuasiForTarget || tag[e] == ClosureTag::QuasiForStart ||
               (tag[e] == ClosureTag::Closed && hard[e]);
    }
    std::vector<bool> blocking_mask() const;
    std::vector<EdgeId> members() const;
    std::vector<EdgeId> blocking() const;
    std::size_t quasi_count() const;
    bool empty() const { return members().empty(); }
};

/// C = {e : w*(e) > w(e)}; hard iff w*(e) = inf.
ClosureSet derive_closures(const RoadNetwork& network);

/// Network whose w* is inf on the blocking edges of `closures` (and w elsewhere).
RoadNetwork apply_closures(const RoadNetwork& network, const ClosureSet& closures);

/// Least fixed point of adding quasi-closed edges to the blocking set. An open
/// edge is quasi-closed for t if t cannot be reached from its head once the
/// current set is removed, and for s if its tail cannot be reached from s.
ClosureSet qc_closure(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                      VertexId s, VertexId t);

enum class Side : std::uint8_t {
    ForTarget,  ///< obstructed for target t (grants forward permits)
    ForStart,   ///< obstructed for start s (grants reverse permits)
};

struct ObstructionRecord {
    VertexId vertex = kNoVertex;
    Side side = Side::ForTarget;
    DrawVector state;
    Level level = 0;
    /// A closure on a witnessing walk.
    EdgeId closure = kNoEdge;
    /// Initial (ForTarget) or final (ForStart) vector; absent means all-inf.
    std::optional<DrawVector> omega;
    bool permit = false;  ///< level below the top level

    friend bool operator==(const ObstructionRecord&, const ObstructionRecord&) = default;
};

enum class ObstructionBackend {
    Search,     ///< product-graph searches, near-linear per variant
    Enumerate,  ///< enumeration of simple paths; desk-scale, positive weights only
};

/// All C-obstructed vertices for t and for s, in both the all-inf variant and
/// the variant amended with the static draw of non-saturated vertices.
/// Obstruction is evaluated in (G,w) with the blocking edges present.
/// Records are sorted by (side, vertex, has omega).
std::vector<ObstructionRecord> find_obstructed(const RoadNetwork& network, const ScopeMapping& scope,
                                               const ClosureSet& closures, VertexId s, VertexId t,
                                               ObstructionBackend backend = ObstructionBackend::Search);

/// Everything a simple-detour walk is judged against.
struct DetourContext {
    VertexId s = kNoVertex;
    VertexId t = kNoVertex;
    Level top = 0;
    std::vector<Level> levels;  ///< per edge
    std::vector<bool> blocked;
    std::vector<bool> forward_admissible;  ///< s-admissible in (G,w)
    std::vector<bool> reverse_admissible;  ///< t-admissible in reverse (G,w)
    std::vector<std::uint16_t> permit_levels;   ///< forward permit levels per vertex
    std::vector<std::uint16_t> reverse_levels;  ///< reverse permit levels per vertex
    /// Bit l set iff the vertex is left (resp. entered) by an unblocked edge of level > l.
    std::vector<std::uint16_t> leave_above;
    std::vector<std::uint16_t> enter_above;
    std::vector<ObstructionRecord> records;
    std::size_t scanned = 0;  ///< vertices scanned while building the context
};

DetourContext make_detour_context(const RoadNetwork& network, const ScopeMapping& scope,
                                  const ClosureSet& closures, VertexId s, VertexId t,
                                  ObstructionBackend backend = ObstructionBackend::Search);

/// Simple C-detour admissibility of an s-t walk against a context.
bool validate_simple_detour(const RoadNetwork& network, const ScopeMapping& scope,
                            const DetourContext& context, const Walk& walk);
/// Builds the context with the enumerative backend.
bool validate_simple_detour(const RoadNetwork& network, const ScopeMapping& scope,
                            const ClosureSet& closures, const Walk& walk, VertexId s, VertexId t);

enum class DetourClass { Static, SimpleDetour, EnhancedDetour, Unreachable };

const char* to_string(DetourClass c);

struct DetourStats {
    std::size_t scanned_static = 0;
    std::size_t scanned_detour = 0;       ///< distinct vertices scanned per direction by the permit search
    std::size_t scanned_obstruction = 0;  ///< vertices scanned while identifying obstructions
    std::size_t permits = 0;              ///< edges of the result justified by a permit
    std::size_t obstructed = 0;
    std::size_t qc_edges = 0;
    std::size_t qc_iterations = 0;
};

struct DetourResult {
    Walk walk;
    double cost = kInf;  ///< w*(walk)
    DetourClass cls = DetourClass::Unreachable;
    Walk static_walk;
    double static_w = kInf;
    double static_wstar = kInf;
    /// Per edge of `walk`: used under a permit.
    std::vector<bool> permit_edges;
    DetourStats stats;

    bool reachable() const { return cls != DetourClass::Unreachable; }
};

/// Static route P on (G,w); if w(P) = w*(P) P is returned. Otherwise the
/// cheapest simple-detour admissible walk Q under w* is computed and the
/// cheaper of Q and P under w* is returned.
DetourResult simple_detour_route(const RoadNetwork& network, const ScopeMapping& scope,
                                 const ClosureSet& closures, VertexId s, VertexId t);

/// simple_detour_route with the closures replaced by their qc-closure.
DetourResult enhanced_detour_route(const RoadNetwork& network, const ScopeMapping& scope,
                                   const ClosureSet& closures, VertexId s, VertexId t);

struct DetourSearchResult {
    bool reachable = false;
    double cost = kInf;
    Walk walk;
    std::vector<bool> permit_edges;
    std::size_t scanned = 0;
};

/// Cheapest walk accepted by the context's simple-detour rules, under w*.
/// Forward search over (vertex, phase, open permits, pending obligations).
DetourSearchResult detour_search(const RoadNetwork& network, const DetourContext& context);

/// Minimum w* over walks accepted by validate_simple_detour, by enumeration of
/// walks with w* cost <= cost_bound and at most hop_bound edges. Prefixes that
/// cannot reach t within the bound, even by the cheapest open continuation,
/// are cut.
BruteForceResult brute_force_simple_detour(const RoadNetwork& network, const ScopeMapping& scope,
                                           const DetourContext& context, double cost_bound,
                                           std::size_t hop_bound, std::size_t walk_budget = 5'000'000);

}  // namespace scope
