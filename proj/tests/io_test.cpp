#include <doctest.h>

#include <set>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "scope/io.hpp"

using namespace scope;

namespace {

const char* kN1 = R"(# N1
V 4
L 0:5 inf:inf
E 0 1 2 inf
E 1 2 10 0
E 2 3 2 inf
E 1 3 20 0 residential
C 0 -90 40
C 1 -89.99 40
C 2 -89.98 40.01
C 3 -89.97 40
)";

NetworkFile parse(const std::string& text) {
    std::istringstream in(text);
    return read_network(in, "net");
}

std::string write(const NetworkFile& f) {
    std::ostringstream out;
    write_network(out, f);
    return out.str();
}

}  // namespace

TEST_SUITE("ingest-io") {

TEST_CASE("network file round trip") {
    auto f = parse(kN1);
    CHECK(f.network == fixtures::n1());
    CHECK(f.scope.levels()[0] == 1);
    CHECK(f.scope.nu(0) == 5);
    CHECK(f.scope.labels() == std::vector<std::string>{"0", "inf"});
    CHECK(f.categories[3] == "residential");
    CHECK(f.has_coords());
    const std::string once = write(f);
    const std::string twice = write(parse(once));
    CHECK(once == twice);
    CHECK(parse(once).network == f.network);
    CHECK(parse(once).scope == f.scope);
}

TEST_CASE("scope value line") {
    CHECK_NOTHROW(parse("V 2\nL 0 5 inf\nE 0 1 1 2\n"));
    auto g = parse("V 2\nL 0 5 inf\nE 0 1 1 1\n");
    CHECK(g.scope.level(0) == 1);
    try {
        parse("V 2\nL 0 5 5\n");
        FAIL("accepted non-increasing nu");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 7);
    }
    CHECK_THROWS_AS(parse("V 2\nL 0 5\n"), ParseError);
}

TEST_CASE("parse errors carry locations") {
    auto where = [](const std::string& text) {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return std::make_pair(e.line(), e.column());
        }
        return std::make_pair(std::size_t(0), std::size_t(0));
    };
    CHECK(where("V 2\nL 0 inf\nE 0 7 1 0\n") == std::make_pair(std::size_t(3), std::size_t(5)));
    CHECK(where("V 2\nL 0 inf\n\n# c\nE 0 1 x 0\n") == std::make_pair(std::size_t(5), std::size_t(7)));
    CHECK(where("V 2\nL 0 inf\nE 0 1 1 9\n") == std::make_pair(std::size_t(3), std::size_t(9)));
    CHECK(where("V 2\nE 0 1 1 0\n") == std::make_pair(std::size_t(2), std::size_t(1)));
    CHECK(where("V 2\nL 0 inf\nQ\n") == std::make_pair(std::size_t(3), std::size_t(1)));
    CHECK(where("V 2\nL 0 inf\nE 0 1 -1 0\n") == std::make_pair(std::size_t(3), std::size_t(7)));
    std::istringstream in("V 1\n");
    CHECK_THROWS_WITH_AS(read_network(in, "x.net"), doctest::Contains("x.net:1:1"), ParseError);
}

TEST_CASE("closure and walk files") {
    auto f = parse(kN1);
    std::istringstream c("# closures\n1\n0,1 3\n");
    auto g = read_closures(c, f.network, "c");
    CHECK(g.weight(1, Weighting::Updated) == kInf);
    CHECK(g.weight(0, Weighting::Updated) == 3);
    CHECK(g.weight(2, Weighting::Updated) == 2);
    std::ostringstream out;
    write_closures(out, g);
    CHECK(out.str() == "0 3\n1\n");
    std::istringstream below("0 1\n");
    CHECK_THROWS_AS(read_closures(below, f.network), ParseError);
    std::istringstream missing("2,0\n");
    CHECK_THROWS_AS(read_closures(missing, f.network), ParseError);

    std::istringstream w("0 0\n1 2 # s a b t\n");
    CHECK(read_walk(w, f.network) == Walk{0, {0, 1, 2}});
    std::istringstream broken("0 0 2\n");
    CHECK_THROWS_AS(read_walk(broken, f.network), ParseError);
    std::ostringstream wo;
    write_walk(wo, Walk{0, {0, 3}});
    CHECK(wo.str() == "0 0 3\n");
}

TEST_CASE("scope from categories") {
    std::vector<std::string> cats{"motorway", "residential", "motorway"};
    CategoryTable t{{"motorway", 1}, {"residential", 0}};
    auto sc = assign_scope_from_categories(cats, t, {5, kInf});
    CHECK(sc.levels()[0] == 1);
    CHECK(sc.levels()[1] == 0);
    CHECK_THROWS_WITH_AS(assign_scope_from_categories({"footway", "motorway", "bridleway"}, t, {5, kInf}),
                         "unmapped road categories: bridleway footway", InvalidInput);
    auto one = assign_scope_from_categories({"residential", "residential"}, t, {5, kInf});
    CHECK(one.levels()[0] == one.levels()[1]);
    auto osm = default_osm_table(5);
    std::set<Level> used;
    for (auto& [k, l] : osm) used.insert(l);
    CHECK(used == std::set<Level>{0, 1, 2, 3, 4});
    CHECK(osm.at("motorway") == 4);
    CHECK(osm.at("residential") == 0);
    CHECK(default_osm_table(2).at("primary") == 1);
}

TEST_CASE("synthetic networks") {
    auto a = generate_synthetic(SyntheticKind::Grid, 12, 3, 7);
    auto b = generate_synthetic(SyntheticKind::Grid, 12, 3, 7);
    CHECK(write(a) == write(b));
    CHECK(write(a) != write(generate_synthetic(SyntheticKind::Grid, 12, 3, 8)));
    CHECK_NOTHROW(validate_scope_mapping(a.scope, a.network));
    CHECK(is_routing_connected(a.network));
    CHECK(is_proper(a.network, balance_to_proper(a.network, a.scope)));
    CHECK(a.has_coords());

    auto r = generate_synthetic(SyntheticKind::Random, 60, 2, 3);
    CHECK(is_routing_connected(r.network));
    for (Level l : r.scope.levels()) CHECK(l <= 1);
    CHECK(is_proper(r.network, balance_to_proper(r.network, r.scope)));
    CHECK(write(r) == write(generate_synthetic(SyntheticKind::Random, 60, 2, 3)));

    auto big = generate_synthetic(SyntheticKind::Grid, 46, 3, 1);
    CHECK(big.network.edge_count() > 9000);
    CHECK(big.network.edge_count() < 11000);
    CHECK(generate_synthetic(SyntheticKind::Grid, 1, 2, 1).network.edge_count() == 0);
}

TEST_CASE("route export") {
    auto f = parse(kN1);
    std::ostringstream csv;
    CHECK(export_route(csv, Walk{0, {0, 1, 2}}, f.network, f.scope, f.coords, {false, true, false}, RouteFormat::Csv) ==
          RouteFormat::Csv);
    CHECK(csv.str() ==
          "edge_id,tail,head,weight,level,permit\n0,0,1,2,1,0\n1,1,2,10,0,1\n2,2,3,2,1,0\n");
    std::ostringstream gj;
    CHECK(export_route(gj, Walk{0, {0, 1, 2}}, f.network, f.scope, f.coords, {false, true, false},
                       RouteFormat::GeoJson) == RouteFormat::GeoJson);
    auto doc = nlohmann::json::parse(gj.str());
    CHECK(doc["type"] == "FeatureCollection");
    REQUIRE(doc["features"].size() == 3);
    CHECK(doc["features"][1]["properties"]["permit"] == true);
    CHECK(doc["features"][1]["geometry"]["type"] == "LineString");
    std::ostringstream empty;
    export_route(empty, Walk{0, {}}, f.network, f.scope, f.coords, {}, RouteFormat::GeoJson);
    CHECK(nlohmann::json::parse(empty.str())["features"].empty());
    std::ostringstream empty_csv;
    export_route(empty_csv, Walk{0, {}}, f.network, f.scope, f.coords, {}, RouteFormat::Csv);
    CHECK(empty_csv.str() == "edge_id,tail,head,weight,level,permit\n");

    auto nocoord = parse("V 2\nL 0 inf\nE 0 1 1 0\nE 1 0 1 0\n");
    std::ostringstream fb;
    CHECK(export_route(fb, Walk{0, {0, 1, 0}}, nocoord.network, nocoord.scope, nocoord.coords, {},
                       RouteFormat::GeoJson) == RouteFormat::Csv);
    CHECK(fb.str() == "edge_id,tail,head,weight,level,permit\n0,0,1,1,0,0\n1,1,0,1,0,0\n0,0,1,1,0,0\n");
}

}
