#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scope/network.hpp"

namespace scope {

/// Forward searches follow edges tail->head; Reverse searches run in G^R
/// (follow edges head->tail) without materializing the reversed network.
enum class Direction { Forward, Reverse };

struct SearchOptions {
    Weighting weighting = Weighting::Base;
    Direction direction = Direction::Forward;
    /// Initial S-vector at the source; zero when absent. Seeding sigma[source]
    /// with omega realizes (source, omega)-admissibility.
    std::optional<DrawVector> initial;
    /// Edges treated as absent (size edge_count, or empty for none).
    std::vector<bool> excluded;
    /// Classical Dijkstra stops once this vertex is scanned.
    VertexId target = kNoVertex;
};

/// Labels of a single search run. sigma is stored flat (vertex-major).
struct SearchResult {
    VertexId source = kNoVertex;
    Direction direction = Direction::Forward;
    std::size_t levels = 0;
    std::vector<double> dist;
    std::vector<EdgeId> pred;
    std::vector<double> sigma;
    std::vector<bool> scanned;
    /// Edges relaxed by the run, i.e. whose admissibility gate passed at a
    /// scanned tail. For S-Dijkstra this is the set of source-admissible edges.
    std::vector<bool> relaxed;
    std::size_t scanned_count = 0;
    std::size_t relaxed_count = 0;
    std::size_t max_scans_per_vertex = 0;

    bool reached(VertexId v) const { return dist[v] < kInf; }
    DrawVector sigma_of(VertexId v) const;
    double sigma_at(VertexId v, Level l) const { return sigma[v * levels + l]; }
};

/// Walk from the source to v following predecessor edges. For reverse runs
/// the returned walk is oriented in G (from v to the source).
Walk extract_walk(const RoadNetwork& network, const SearchResult& result, VertexId v);

/// Classical label-setting Dijkstra (no scope gating). Edges of weight inf are
/// never relaxed.
SearchResult dijkstra(const RoadNetwork& network, VertexId source, const SearchOptions& options = {});

/// Scope-aware Dijkstra: relaxes f=(u,v) only if sigma_{S(f)}[u] <= nu_{S(f)}.
/// On a strict improvement sigma[v] is replaced by sigma[u]+gamma, on a tie the
/// component-wise minimum is kept.
SearchResult s_dijkstra(const RoadNetwork& network, const ScopeMapping& scope, VertexId source,
                        const SearchOptions& options = {});

struct RouteResult {
    bool reachable = false;
    double cost = kInf;
    Walk walk;
    VertexId meeting = kNoVertex;
    std::size_t scanned_forward = 0;
    std::size_t scanned_reverse = 0;

    std::size_t scanned() const { return scanned_forward + scanned_reverse; }
};

/// Minimum-weight S-admissible s-t walk: an s-admissible prefix followed by a
/// suffix that is t-admissible in G^R. Forward and reverse runs alternate;
/// each stops once its queue minimum reaches the best meeting cost.
RouteResult bidirectional_s_dijkstra(const RoadNetwork& network, const ScopeMapping& scope,
                                     VertexId s, VertexId t,
                                     Weighting weighting = Weighting::Base,
                                     const std::vector<bool>& excluded = {});

/// Every finite level budget exhausted: sigma_l > nu_l for all l < top.
bool is_saturated(const DrawVector& sigma, const ScopeMapping& scope);

// --- Enumerative oracles (desk-scale, positive weights only) ---------------

struct OracleOptions {
    Weighting weighting = Weighting::Base;
    Direction direction = Direction::Forward;
    std::optional<DrawVector> initial;
    std::vector<bool> excluded;
    std::size_t path_budget = 2'000'000;
};

/// Evaluates edge admissibility (root-admissible edges, optionally amended
/// with an initial vector) straight from the definition: all simple paths
/// from the root are enumerated and processed in order of weight, an edge is
/// admissible iff its tail has an optimal all-admissible path whose draw
/// (plus the initial vector) is within nu at the edge's level. Shares no code
/// with the label-setting searches.
class AdmissibilityOracle {
public:
    AdmissibilityOracle(const RoadNetwork& network, const ScopeMapping& scope, VertexId root,
                        const OracleOptions& options = {});

    bool complete() const { return complete_; }
    bool admissible(EdgeId e) const { return admissible_[e]; }
    const std::vector<bool>& admissible_edges() const { return admissible_; }
    double distance(VertexId v) const { return dist_[v]; }
    /// Component-wise minimum draw (initial included) over optimal admissible paths.
    const DrawVector& draw(VertexId v) const { return draw_[v]; }
    VertexId root() const { return root_; }

private:
    VertexId root_;
    bool complete_ = true;
    std::vector<bool> admissible_;
    std::vector<double> dist_;
    std::vector<DrawVector> draw_;
};

/// Every edge of the walk is s-admissible (walk must start at s).
bool validate_s_admissible(const RoadNetwork& network, const ScopeMapping& scope, const Walk& walk,
                           VertexId s, Weighting weighting = Weighting::Base);

/// S-admissible s-t walk: exists a split j with edges 1..j s-admissible and
/// edges j+1..k t-admissible in reverse.
bool validate_S_admissible(const RoadNetwork& network, const ScopeMapping& scope, const Walk& walk,
                           VertexId s, VertexId t, Weighting weighting = Weighting::Base);

/// Same check against precomputed oracles.
bool split_admissible(const RoadNetwork& network, const Walk& walk, const std::vector<bool>& forward,
                      const std::vector<bool>& reverse);

enum class BruteStatus { Found, Unreachable, BudgetExceeded };

struct BruteForceResult {
    BruteStatus status = BruteStatus::Unreachable;
    double cost = kInf;
    Walk walk;
};

enum class AdmissibilityKind {
    SourceOnly,  ///< s-admissible walks (what unidirectional S-Dijkstra optimizes to t)
    Split,       ///< S-admissible walks (s-admissible prefix, reverse t-admissible suffix)
};

/// Enumerates walks from s with at most hop_bound edges and returns the
/// cheapest admissible s-t walk of the requested kind.
BruteForceResult brute_force_optimal_admissible(const RoadNetwork& network, const ScopeMapping& scope,
                                                VertexId s, VertexId t, std::size_t hop_bound,
                                                AdmissibilityKind kind = AdmissibilityKind::Split,
                                                std::size_t walk_budget = 20'000'000);

}  // namespace scope
