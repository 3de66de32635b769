#pragma once

// Incremental label-setting search shared by the unidirectional and
// bidirectional drivers.

#include <queue>
#include <utility>
#include <vector>

#include "scope/search.hpp"

namespace scope::detail {

class SearchEngine {
public:
    /// scope == nullptr runs classical Dijkstra.
    SearchEngine(const RoadNetwork& network, const ScopeMapping* scope, VertexId source,
                 const SearchOptions& options);

    bool done() const;
    double top_key();
    /// Scans the next vertex; returns it (kNoVertex if the queue is exhausted).
    VertexId step();
    void run();

    SearchResult& result() { return r_; }
    const std::vector<VertexId>& touched() const { return touched_; }

private:
    using Item = std::pair<double, VertexId>;

    void skip_stale();

    const RoadNetwork& net_;
    const ScopeMapping* scope_;
    SearchOptions opt_;
    SearchResult r_;
    std::vector<std::uint32_t> scan_count_;
    std::vector<VertexId> touched_;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq_;
};

}  // namespace scope::detail
