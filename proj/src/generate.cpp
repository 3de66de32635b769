#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "scope/io.hpp"

namespace scope {

namespace {

// Platform-independent draws from mt19937_64.
struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    std::uint64_t below(std::uint64_t n) { return g() % n; }
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    double unit() { return double(g() >> 11) * 0x1.0p-53; }
};

struct Builder {
    std::vector<EdgeSpec> edges;
    std::vector<Level> levels;
    std::vector<std::optional<LonLat>> coords;

    VertexId vertex(LonLat c) {
        coords.push_back(c);
        return VertexId(coords.size() - 1);
    }
    void edge(VertexId u, VertexId v, double w, Level l) {
        edges.push_back({u, v, w});
        levels.push_back(l);
    }
};

std::vector<double> nu_values(std::size_t level_count, double step) {
    std::vector<double> nu;
    for (std::size_t l = 0; l + 1 < level_count; ++l) nu.push_back(step * double(l + 1));
    nu.push_back(kInf);
    return nu;
}

// One-way chain u -> ... -> v with m interior vertices, total weight w.
void chain(Builder& b, Rng& r, VertexId u, VertexId v, double w, Level l, double offset) {
    const auto m = std::min<std::uint64_t>(r.between(1, 3), std::uint64_t(w) - 1);
    const LonLat a = *b.coords[u], c = *b.coords[v];
    const double dx = c[0] - a[0], dy = c[1] - a[1];
    const double len = std::hypot(dx, dy);
    VertexId prev = u;
    double left = w;
    for (std::uint64_t i = 1; i <= m; ++i) {
        const double f = double(i) / double(m + 1);
        const VertexId x = b.vertex({a[0] + f * dx - offset * dy / len, a[1] + f * dy + offset * dx / len});
        const double piece = std::floor(w / double(m + 1));
        b.edge(prev, x, piece, l);
        left -= piece;
        prev = x;
    }
    b.edge(prev, v, left, l);
}

Builder grid(std::size_t size, std::size_t level_count, Rng& r) {
    const Level top = Level(level_count - 1);
    auto line_level = [&](std::size_t i) -> Level {
        for (Level k = top; k >= 1; --k)
            if (i % (std::size_t(4) << (k - 1)) == 0) return k;
        return 0;
    };
    Builder b;
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) b.vertex({-90.0 + 0.001 * double(j), 40.0 + 0.001 * double(i)});
    auto id = [&](std::size_t i, std::size_t j) { return VertexId(i * size + j); };
    auto segment = [&](VertexId u, VertexId v, Level l) {
        const double w = double(l == 0 ? r.between(4, 12) : r.between(2, 6));
        if (r.below(10) == 0) {
            chain(b, r, u, v, w, l, 0.0001);
            chain(b, r, v, u, w, l, 0.0001);
        } else {
            b.edge(u, v, w, l);
            b.edge(v, u, w, l);
        }
    };
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            if (j + 1 < size) segment(id(i, j), id(i, j + 1), line_level(i));
            if (i + 1 < size) segment(id(i, j), id(i + 1, j), line_level(j));
        }
    }
    return b;
}

Builder random_network(std::size_t size, std::size_t level_count, Rng& r) {
    Builder b;
    std::vector<std::array<double, 2>> p(size);
    for (auto& q : p) {
        q = {r.unit(), r.unit()};
        b.vertex({-90.0 + 0.05 * q[0], 40.0 + 0.05 * q[1]});
    }
    std::set<std::pair<VertexId, VertexId>> links;
    auto link = [&](VertexId u, VertexId v) {
        if (u != v) links.insert(std::minmax(u, v));
    };
    for (VertexId u = 0; u < size; ++u) {
        std::vector<VertexId> near(size);
        for (VertexId v = 0; v < size; ++v) near[v] = v;
        auto d2 = [&](VertexId v) { return std::pow(p[u][0] - p[v][0], 2) + std::pow(p[u][1] - p[v][1], 2); };
        std::sort(near.begin(), near.end(), [&](VertexId a, VertexId c) { return std::make_pair(d2(a), a) < std::make_pair(d2(c), c); });
        for (std::size_t k = 1; k < std::min<std::size_t>(4, size); ++k) link(u, near[k]);
    }
    std::vector<VertexId> perm(size);
    for (VertexId v = 0; v < size; ++v) perm[v] = v;
    for (std::size_t i = size; i > 1; --i) std::swap(perm[i - 1], perm[r.below(i)]);
    for (std::size_t i = 1; i < size; ++i) link(perm[i - 1], perm[i]);
    const Level top = Level(level_count - 1);
    for (auto [u, v] : links) {
        const double w = 1 + std::round(100 * std::hypot(p[u][0] - p[v][0], p[u][1] - p[v][1]));
        const Level l = r.below(10) < 6 ? Level(0) : Level(r.between(1, top));
        b.edge(u, v, w, l);
        b.edge(v, u, w, l);
    }
    return b;
}

}  // namespace

NetworkFile generate_synthetic(SyntheticKind kind, std::size_t size, std::size_t level_count, std::uint64_t seed,
                               double nu_step) {
    if (size < 1) throw InvalidInput("size must be at least 1");
    if (level_count < 2 || level_count > 16) throw InvalidInput("level count must be in 2..16");
    if (!(nu_step > 0)) throw InvalidInput("nu step must be positive");
    Rng r(seed);
    Builder b = kind == SyntheticKind::Grid ? grid(size, level_count, r) : random_network(size, level_count, r);
    NetworkFile f;
    f.network = RoadNetwork(b.coords.size(), b.edges);
    f.scope = ScopeMapping(std::move(b.levels), nu_values(level_count, nu_step));
    f.categories.assign(f.network.edge_count(), std::string());
    f.coords = std::move(b.coords);
    return f;
}

}  // namespace scope
