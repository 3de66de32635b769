#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scope/detour.hpp"

namespace scope {

struct PlacedClosures {
    ClosureSet closures;
    std::vector<EdgeId> edges;  ///< midpoint edge first, then the random ones
    std::optional<std::string> warning;
};

/// One closure on the edge of base_walk containing its weighted midpoint,
/// plus count - 1 distinct top-level edges drawn uniformly from the rest.
/// Warns and places what is available if there are too few top-level edges.
PlacedClosures place_random_closures(const RoadNetwork& network, const ScopeMapping& scope, const Walk& base_walk,
                                     std::size_t count, std::uint64_t seed);

/// Seed of the independent random stream for item `index` of a run.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

struct BenchConfig {
    std::size_t query_count = 500;
    std::size_t closure_count = 50;
    std::uint64_t seed = 1;
    bool run_simple = true;
    bool run_enhanced = true;
    /// Wall-clock timing; off leaves the timing columns empty so that the
    /// report is byte-reproducible.
    bool timing = true;
    std::size_t repetitions = 5;  ///< timed runs per query, median reported
    /// Also count quasi-closures on the degree-2 contracted network.
    bool compare_contracted = false;
    /// Pairs are redrawn until their static distance reaches this quantile
    /// of a calibration sample.
    double distance_quantile = 0.5;
    std::size_t calibration_pairs = 200;
};

struct QueryRecord {
    std::size_t query = 0;
    VertexId src = kNoVertex, dst = kNoVertex;
    double static_w = kInf, static_wstar = kInf;
    double simple_wstar = kInf, enhanced_wstar = kInf;
    std::size_t scanned_static = 0, scanned_simple = 0, scanned_enhanced = 0;
    std::size_t scanned_obstruction = 0;
    std::size_t permits = 0;
    std::size_t qc_edges = 0, qc_iters = 0;
    std::optional<std::size_t> qc_edges_contracted;
    double ms_simple = 0, ms_enhanced = 0;
    DetourClass simple_class = DetourClass::Unreachable;
    DetourClass enhanced_class = DetourClass::Unreachable;
    bool validated = true;     ///< every emitted walk passed its validator
    std::string error;         ///< per-query failure, empty if none
};

struct BenchReport {
    BenchConfig config;
    std::size_t vertices = 0, edges = 0;
    double distance_threshold = 0;
    std::vector<QueryRecord> records;
    std::vector<std::string> warnings;
};

/// Samples query pairs, places closures and runs the static, simple and
/// enhanced routes per query, re-checking every result. Per-query failures
/// are recorded, never thrown. Deterministic in config.seed apart from timings.
BenchReport run_benchmark(const RoadNetwork& network, const ScopeMapping& scope, const BenchConfig& config);

/// CSV header: query,src,dst,static_w,static_wstar,simple_wstar,enhanced_wstar,
/// scanned_static,scanned_simple,scanned_enhanced,permits,qc_edges,qc_iters,
/// ms_simple,ms_enhanced (plus qc_edges_contracted when compared).
void write_csv(std::ostream& out, const BenchReport& report);

struct BenchSummary {
    std::size_t queries = 0, failures = 0, invalid = 0;
    std::size_t simple_found = 0, enhanced_found = 0;
    std::size_t enhanced_worse = 0;  ///< enhanced cost above simple cost, both found
    double mean_ms_simple = 0, mean_ms_enhanced = 0;
    double mean_scanned_static = 0, mean_scanned_simple = 0, mean_scanned_enhanced = 0;
    double mean_scanned_obstruction = 0;
    double scanned_overhead = 0;  ///< mean_scanned_simple / mean_scanned_static - 1
    double mean_permits = 0;
    double mean_qc_edges = 0;
    std::size_t max_qc_edges = 0, max_qc_iters = 0;
    std::optional<double> mean_qc_edges_contracted;
};

BenchSummary summarize(const BenchReport& report);
void write_summary(std::ostream& out, const BenchReport& report);

}  // namespace scope
