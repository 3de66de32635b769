#pragma once

#include <random>
#include <vector>

#include "scope/network.hpp"

namespace fixtures {

using namespace scope;

// N1: s=0, a=1, b=2, t=3.
// e0=(s,a,2) e1=(a,b,10) e2=(b,t,2) e3=(a,t,20); levels 0, top, 0, top.
inline RoadNetwork n1() {
    std::vector<EdgeSpec> e{{0, 1, 2}, {1, 2, 10}, {2, 3, 2}, {1, 3, 20}};
    return RoadNetwork(4, e);
}

inline ScopeMapping n1_scope(double nu0) { return ScopeMapping({0, 1, 0, 1}, {nu0, kInf}); }

// N1 plus e4=(a,b,4) at level 0.
inline ScopeMapping n1e5_scope(double nu0) { return ScopeMapping({0, 1, 0, 1, 0}, {nu0, kInf}); }

inline RoadNetwork n1e5() {
    std::vector<EdgeSpec> e{{0, 1, 2}, {1, 2, 10}, {2, 3, 2}, {1, 3, 20}, {1, 2, 4}};
    return RoadNetwork(4, e);
}

struct Random {
    std::mt19937_64 rng;
    explicit Random(std::uint64_t seed) : rng(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
    bool coin(double p) { return std::bernoulli_distribution(p)(rng); }
};

struct Instance {
    RoadNetwork net;
    ScopeMapping scope;
};

// Random multigraph with integer weights in [1, max_w] and levels in
// 0..levels-1 (levels-1 being the unbounded one).
inline Instance random_instance(Random& r, int max_v, int max_e, int levels, int max_w = 20) {
    const int n = r.uniform(2, max_v);
    const int m = r.uniform(1, max_e);
    std::vector<EdgeSpec> edges;
    std::vector<Level> lv;
    for (int i = 0; i < m; ++i) {
        VertexId u = r.uniform(0, n - 1), v = r.uniform(0, n - 1);
        if (u == v) v = (v + 1) % n;
        edges.push_back({u, v, double(r.uniform(1, max_w))});
        lv.push_back(static_cast<Level>(r.uniform(0, levels - 1)));
    }
    double acc = r.uniform(0, max_w);
    std::vector<double> nu{acc};
    for (int l = 1; l < levels - 1; ++l) {
        acc += r.uniform(1, 3 * max_w);
        nu.push_back(acc);
    }
    nu.push_back(kInf);
    return {RoadNetwork(n, edges), ScopeMapping(lv, nu)};
}

}  // namespace fixtures
