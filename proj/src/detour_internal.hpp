#pragma once

#include <optional>
#include <vector>

#include "scope/detour.hpp"

namespace scope::detail {

/// Static (G,w) admissibility from both endpoints.
struct StaticLabels {
    std::vector<bool> forward_admissible;
    std::vector<bool> reverse_admissible;
    std::vector<DrawVector> sigma_s;
    std::vector<DrawVector> sigma_t;
    std::vector<bool> reach_s;
    std::vector<bool> reach_t;
    std::vector<double> dist_s;  ///< length of the static admissible walk from s
    std::vector<double> dist_t;  ///< likewise to t
    std::size_t scanned = 0;
};

StaticLabels static_labels(const RoadNetwork& network, const ScopeMapping& scope, VertexId s, VertexId t,
                           ObstructionBackend backend);

std::vector<ObstructionRecord> obstructions(const RoadNetwork& network, const ScopeMapping& scope,
                                            const std::vector<bool>& blocked, VertexId s, VertexId t,
                                            const StaticLabels& labels, ObstructionBackend backend,
                                            std::size_t& scanned);

/// Obstruction of d for the root of `side` by path enumeration; omega absent
/// means the all-inf variant. Throws BudgetExceeded once budget runs out.
std::optional<ObstructionRecord> enumerate_obstructed(const RoadNetwork& network, const ScopeMapping& scope,
                                                      const std::vector<bool>& blocked,
                                                      const std::vector<bool>& suffix, Side side, VertexId d,
                                                      VertexId root, const std::optional<DrawVector>& omega,
                                                      std::size_t& budget);

}  // namespace scope::detail
