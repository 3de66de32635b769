#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scope/detour.hpp"
#include "scope/network.hpp"

namespace scope {

/// Malformed input file; what() reads "source:line:column: message".
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

using LonLat = std::array<double, 2>;

/// Shortest round-trip decimal form; "inf" for infinity.
std::string format_number(double x);

/// Contents of a network file:
///   V <n>
///   L <label>:<nu> ...        (or bare nu values, labelled by index)
///   E <tail> <head> <weight> <level> [category]
///   C <vertex> <lon> <lat>
///   # comment
/// V and L come before any E or C record. Levels in E records are level
/// labels or level indices.
struct NetworkFile {
    RoadNetwork network;
    ScopeMapping scope;
    std::vector<std::string> categories;         ///< per edge, empty when untagged
    std::vector<std::optional<LonLat>> coords;   ///< per vertex

    bool has_coords() const;
};

NetworkFile read_network(std::istream& in, const std::string& source = "<input>");
NetworkFile load_network(const std::string& path);
void write_network(std::ostream& out, const NetworkFile& file);
void save_network(const std::string& path, const NetworkFile& file);

/// Closure file, one closure per line:
///   <edge id> [w*]
///   <tail>,<head>[,<ordinal>] [w*]   (ordinal among parallel tail->head edges)
/// w* defaults to inf (hard closure) and must not be below w.
/// Returns the network with w* applied.
RoadNetwork read_closures(std::istream& in, const RoadNetwork& network, const std::string& source = "<input>");
RoadNetwork load_closures(const std::string& path, const RoadNetwork& network);
void write_closures(std::ostream& out, const RoadNetwork& network);

/// Walk file: start vertex followed by edge ids, whitespace separated.
Walk read_walk(std::istream& in, const RoadNetwork& network, const std::string& source = "<input>");
Walk load_walk(const std::string& path, const RoadNetwork& network);
void write_walk(std::ostream& out, const Walk& walk);

using CategoryTable = std::map<std::string, Level>;

/// Level per OSM highway class, spread over level_count levels: motorway and
/// trunk at the top, then primary, secondary, tertiary, and minor roads at 0.
CategoryTable default_osm_table(std::size_t level_count);

/// Levels looked up per edge category; throws InvalidInput listing every
/// unmapped category.
ScopeMapping assign_scope_from_categories(const std::vector<std::string>& categories, const CategoryTable& table,
                                          std::vector<double> nu, std::vector<std::string> labels = {});

enum class SyntheticKind { Grid, Random };

/// Deterministic synthetic road network.
///   Grid: size x size two-way grid; every 4th line is a level-1 arterial,
///   every 8th level 2 and so on, the top level on the sparsest lines. About
///   one segment in ten is a divided road: two one-way chains with one to
///   three interior vertices each.
///   Random: size vertices in the unit square, two-way links to the nearest
///   neighbours plus a random spanning path, random levels.
/// nu_l = nu_step * (l + 1) below the top. Coordinates are always set.
NetworkFile generate_synthetic(SyntheticKind kind, std::size_t size, std::size_t level_count, std::uint64_t seed,
                               double nu_step = 60);

enum class RouteFormat { GeoJson, Csv };

/// Writes the walk as a GeoJSON FeatureCollection (one LineString per edge
/// with edge_id, level, weight and permit properties) or as CSV
/// `edge_id,tail,head,weight,level,permit`. weight is w*. Falls back to CSV
/// if GeoJSON is requested but a walk vertex lacks coordinates; the returned
/// format says what was written.
RouteFormat export_route(std::ostream& out, const Walk& walk, const RoadNetwork& network, const ScopeMapping& scope,
                         const std::vector<std::optional<LonLat>>& coords, const std::vector<bool>& permit_edges,
                         RouteFormat format);

}  // namespace scope
