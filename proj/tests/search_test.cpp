#include <doctest.h>

#include "fixtures.hpp"
#include "scope/search.hpp"

using namespace scope;

TEST_SUITE("search") {

TEST_CASE("dijkstra on N1") {
    auto n1 = fixtures::n1();
    auto r = dijkstra(n1, 0);
    CHECK(r.dist[3] == 14);
    CHECK(extract_walk(n1, r, 3) == Walk{0, {0, 1, 2}});
    CHECK(extract_walk(n1, r, 0) == Walk{0, {}});

    std::vector<double> ws{2, kInf, 2, 20};
    auto closed = n1.with_updated_weights(ws);
    SearchOptions o;
    o.weighting = Weighting::Updated;
    auto rc = dijkstra(closed, 0, o);
    CHECK(rc.dist[3] == 22);
    CHECK(extract_walk(closed, rc, 3) == Walk{0, {0, 3}});
    CHECK_FALSE(rc.relaxed[1]);
    CHECK_THROWS_AS(dijkstra(n1, 7), InvalidInput);
}

TEST_CASE("s_dijkstra on N1") {
    auto n1 = fixtures::n1();
    auto r5 = s_dijkstra(n1, fixtures::n1_scope(5), 0);
    CHECK(r5.dist[3] == 22);
    CHECK(r5.sigma_at(2, 0) == 10);
    CHECK_FALSE(r5.relaxed[2]);
    CHECK(is_saturated(r5.sigma_of(2), fixtures::n1_scope(5)));
    CHECK_FALSE(is_saturated(r5.sigma_of(1), fixtures::n1_scope(5)));
    auto r15 = s_dijkstra(n1, fixtures::n1_scope(15), 0);
    CHECK(r15.dist[3] == 14);

    ScopeMapping all_top({1, 1, 1, 1}, {0, kInf});
    CHECK(s_dijkstra(n1, all_top, 0).dist == dijkstra(n1, 0).dist);
}

TEST_CASE("is_saturated boundary") {
    ScopeMapping sc({0, 1, 2}, {0, 4, 9, kInf});
    CHECK_FALSE(is_saturated(DrawVector::zero(4), sc));
    CHECK(is_saturated(DrawVector(std::vector<double>{1, 5, 10, 0}), sc));
    CHECK_FALSE(is_saturated(DrawVector(std::vector<double>{1, 4, 10, 0}), sc));
}

TEST_CASE("bidirectional on N1") {
    auto n1 = fixtures::n1();
    auto r = bidirectional_s_dijkstra(n1, fixtures::n1_scope(5), 0, 3);
    REQUIRE(r.reachable);
    CHECK(r.cost == 14);
    CHECK(r.walk == Walk{0, {0, 1, 2}});
    CHECK(validate_S_admissible(n1, fixtures::n1_scope(5), r.walk, 0, 3));

    auto same = bidirectional_s_dijkstra(n1, fixtures::n1_scope(5), 1, 1);
    CHECK(same.reachable);
    CHECK(same.cost == 0);
    CHECK(same.walk.empty());

    // Line s -inf-> x -0-> y -inf-> t with the level-0 edge beyond both budgets.
    std::vector<EdgeSpec> line{{0, 1, 10}, {1, 2, 1}, {2, 3, 10}};
    RoadNetwork g(4, line);
    ScopeMapping sc({1, 0, 1}, {5, kInf});
    auto u = bidirectional_s_dijkstra(g, sc, 0, 3);
    CHECK_FALSE(u.reachable);
    CHECK(u.cost == kInf);
}

TEST_CASE("validate_s_admissible on N1") {
    auto n1 = fixtures::n1();
    Walk w{0, {0, 1, 2}};
    CHECK(validate_s_admissible(n1, fixtures::n1_scope(5), Walk{0, {}}, 0));
    CHECK_FALSE(validate_s_admissible(n1, fixtures::n1_scope(5), w, 0));
    CHECK(validate_s_admissible(n1, fixtures::n1_scope(15), w, 0));
    CHECK_THROWS_AS(validate_s_admissible(n1, fixtures::n1_scope(5), Walk{0, {0, 2}}, 0), InvalidInput);
}

TEST_CASE("brute force on N1") {
    auto n1 = fixtures::n1();
    auto b = brute_force_optimal_admissible(n1, fixtures::n1_scope(15), 0, 3, 6, AdmissibilityKind::SourceOnly);
    CHECK(b.status == BruteStatus::Found);
    CHECK(b.cost == 14);
    auto u = brute_force_optimal_admissible(n1, fixtures::n1_scope(15), 3, 0, 6);
    CHECK(u.status == BruteStatus::Unreachable);
}

TEST_CASE("oracle equivalence on random instances") {
    fixtures::Random r(2024);
    for (int it = 0; it < 150; ++it) {
        auto inst = fixtures::random_instance(r, 10, 24, 3);
        const VertexId s = r.uniform(0, int(inst.net.vertex_count()) - 1);
        const VertexId t = r.uniform(0, int(inst.net.vertex_count()) - 1);
        const std::size_t hops = inst.net.vertex_count();
        auto uni = s_dijkstra(inst.net, inst.scope, s);
        auto bs = brute_force_optimal_admissible(inst.net, inst.scope, s, t, hops, AdmissibilityKind::SourceOnly);
        REQUIRE(bs.status != BruteStatus::BudgetExceeded);
        CHECK(uni.dist[t] == bs.cost);
        auto bi = bidirectional_s_dijkstra(inst.net, inst.scope, s, t);
        auto bb = brute_force_optimal_admissible(inst.net, inst.scope, s, t, hops, AdmissibilityKind::Split);
        CHECK(bi.cost == bb.cost);
        if (bi.reachable) {
            CHECK(walk_weight(inst.net, bi.walk) == bi.cost);
            CHECK(walk_end(inst.net, bi.walk) == t);
            CHECK(validate_S_admissible(inst.net, inst.scope, bi.walk, s, t));
        }
        CHECK(uni.max_scans_per_vertex <= 1);

        // Relaxed-edge set equals the oracle's admissible set.
        AdmissibilityOracle oracle(inst.net, inst.scope, s);
        CHECK(uni.relaxed == oracle.admissible_edges());

        // Split minimum from two unidirectional runs.
        SearchOptions ro;
        ro.direction = Direction::Reverse;
        auto rev = s_dijkstra(inst.net, inst.scope, t, ro);
        double split = kInf;
        for (VertexId v = 0; v < inst.net.vertex_count(); ++v) split = std::min(split, uni.dist[v] + rev.dist[v]);
        CHECK(bi.cost == split);
    }
}

TEST_CASE("raising nu never increases distance") {
    fixtures::Random r(77);
    for (int it = 0; it < 100; ++it) {
        auto inst = fixtures::random_instance(r, 10, 24, 3);
        auto base = s_dijkstra(inst.net, inst.scope, 0);
        std::vector<double> nu(inst.scope.nus().begin(), inst.scope.nus().end());
        const std::size_t l = r.uniform(0, int(nu.size()) - 2);
        for (std::size_t k = l; k + 1 < nu.size(); ++k) nu[k] += 7;
        ScopeMapping raised(std::vector<Level>(inst.scope.levels().begin(), inst.scope.levels().end()), nu);
        auto up = s_dijkstra(inst.net, raised, 0);
        for (VertexId v = 0; v < inst.net.vertex_count(); ++v) CHECK(up.dist[v] <= base.dist[v]);
    }
}

}
