#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "scope/detour.hpp"

namespace scope {

/// Witness for full detour admissibility. Positions index walk vertices
/// u_0..u_k. forward holds a_0 = 0 < a_1 < ... < a_p < k, reverse holds
/// c_0 = k > c_1 > ... > c_q > 0; breakpoints are the positions of B.
struct Decomposition {
    std::vector<std::size_t> forward;
    std::vector<std::size_t> reverse;
    std::vector<std::size_t> breakpoints;
    /// pi per anchor; pi of the two endpoints is the zero vector.
    std::vector<DrawVector> forward_state;
    std::vector<DrawVector> reverse_state;
    /// Initial vector used for each anchor's obstruction; absent means all-inf.
    std::vector<std::optional<DrawVector>> forward_omega;
    std::vector<std::optional<DrawVector>> reverse_omega;

    friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

enum class Verdict { Accepted, Rejected, Indeterminate };

const char* to_string(Verdict v);

struct FullVerdict {
    Verdict verdict = Verdict::Rejected;
    std::optional<Decomposition> witness;
    std::size_t decompositions = 0;  ///< candidates evaluated

    bool accepted() const { return verdict == Verdict::Accepted; }
};

struct FullOptions {
    std::size_t decomposition_budget = 2'000'000;
    std::size_t enumeration_budget = 50'000'000;
};

/// Full C-detour admissibility of an s-t walk: no blocking edge is used and
/// some decomposition into forward anchors (obstructed for t), reverse anchors
/// (obstructed for s) and breakpoints justifies every edge below the top
/// level. Exponential in the walk length; meant for short walks on small
/// networks. Budget exhaustion yields Indeterminate.
FullVerdict validate_full_detour(const RoadNetwork& network, const ScopeMapping& scope,
                                 const ClosureSet& closures, const Walk& walk, VertexId s, VertexId t,
                                 const FullOptions& options = {});

/// Re-evaluates every clause for the given decomposition from scratch,
/// including the recorded states and initial vectors.
bool check_decomposition(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                         const Walk& walk, VertexId s, VertexId t, const Decomposition& decomposition);

struct FullOptimum {
    BruteStatus status = BruteStatus::Unreachable;
    double cost = kInf;  ///< w* of the walk
    Walk walk;
    std::optional<Decomposition> witness;
    std::size_t walks = 0;  ///< s-t walks validated
};

/// Cheapest walk under w* with at most hop_bound edges accepted by
/// validate_full_detour. BudgetExceeded status if any candidate was
/// indeterminate or the walk budget ran out.
FullOptimum brute_force_full_optimum(const RoadNetwork& network, const ScopeMapping& scope,
                                     const ClosureSet& closures, VertexId s, VertexId t, std::size_t hop_bound,
                                     std::size_t walk_budget = 1'000'000, const FullOptions& options = {});

}  // namespace scope
