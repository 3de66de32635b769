#include "scope/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "scope/io.hpp"

namespace scope {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

template <class F>
double median_ms(std::size_t reps, F&& run) {
    std::vector<double> ms;
    for (std::size_t i = 0; i < std::max<std::size_t>(reps, 1); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        run();
        ms.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(ms.begin(), ms.end());
    return ms[ms.size() / 2];
}

bool avoids(const Walk& w, const ClosureSet& c) {
    return std::none_of(w.edges.begin(), w.edges.end(), [&](EdgeId e) { return c.blocks(e); });
}

// Re-checks a detour result against the definition it claims.
bool result_valid(const RoadNetwork& network, const ScopeMapping& scope, const ClosureSet& closures,
                  const DetourResult& r, VertexId s, VertexId t) {
    if (!r.reachable()) return true;
    if (r.walk.start != s || walk_end(network, r.walk) != t || !avoids(r.walk, closures)) return false;
    if (walk_weight(network, r.walk, Weighting::Updated) != r.cost) return false;
    if (r.cls == DetourClass::Static) {
        SearchOptions ro;
        ro.direction = Direction::Reverse;
        auto f = s_dijkstra(network, scope, s);
        auto b = s_dijkstra(network, scope, t, ro);
        return split_admissible(network, r.walk, f.relaxed, b.relaxed);
    }
    auto ctx = make_detour_context(network, scope, closures, s, t);
    return validate_simple_detour(network, scope, ctx, r.walk);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) { return splitmix(splitmix(seed) ^ index); }

PlacedClosures place_random_closures(const RoadNetwork& network, const ScopeMapping& scope, const Walk& base_walk,
                                     std::size_t count, std::uint64_t seed) {
    if (base_walk.empty()) throw InvalidInput("closure placement needs a nonempty walk");
    check_walk(network, base_walk);
    PlacedClosures out;
    if (count == 0) {
        out.closures = ClosureSet::none(network.edge_count());
        return out;
    }
    const double half = walk_weight(network, base_walk) / 2;
    double acc = 0;
    EdgeId mid = base_walk.edges.back();
    for (EdgeId e : base_walk.edges) {
        acc += network.weight(e);
        if (acc >= half) {
            mid = e;
            break;
        }
    }
    out.edges.push_back(mid);
    std::vector<EdgeId> pool;
    for (EdgeId e = 0; e < network.edge_count(); ++e)
        if (scope.unbounded(e) && e != mid) pool.push_back(e);
    std::mt19937_64 rng(seed);
    const std::size_t want = count - 1;
    if (pool.size() < want) {
        out.warning = "only " + std::to_string(pool.size()) + " unbounded edges available for " +
                      std::to_string(want) + " random closures";
    }
    const std::size_t take = std::min(want, pool.size());
    for (std::size_t i = 0; i < take; ++i) {
        std::swap(pool[i], pool[i + rng() % (pool.size() - i)]);
        out.edges.push_back(pool[i]);
    }
    out.closures = ClosureSet::of(network.edge_count(), out.edges);
    return out;
}

BenchReport run_benchmark(const RoadNetwork& network, const ScopeMapping& scope, const BenchConfig& config) {
    validate_scope_mapping(scope, network);
    BenchReport rep;
    rep.config = config;
    rep.vertices = network.vertex_count();
    rep.edges = network.edge_count();
    if (config.query_count == 0) return rep;

    const auto contracted = contract_degree2_chains(network, scope);
    std::vector<VertexId> junctions;
    for (VertexId v = 0; v < network.vertex_count(); ++v)
        if (contracted.vertex_map[v] != kNoVertex) junctions.push_back(v);
    if (junctions.size() < 2) throw InvalidInput("network too small for queries");

    auto pick = [&](std::mt19937_64& rng) { return junctions[rng() % junctions.size()]; };

    {
        std::mt19937_64 rng(stream_seed(config.seed, ~std::uint64_t(0)));
        std::vector<double> d;
        for (std::size_t i = 0; i < config.calibration_pairs; ++i) {
            const VertexId s = pick(rng), t = pick(rng);
            auto r = bidirectional_s_dijkstra(network, scope, s, t);
            if (r.reachable && s != t) d.push_back(r.cost);
        }
        if (!d.empty()) {
            std::sort(d.begin(), d.end());
            const auto q = std::clamp(config.distance_quantile, 0.0, 1.0);
            rep.distance_threshold = d[std::min(d.size() - 1, std::size_t(q * double(d.size())))];
        }
    }

    for (std::size_t i = 0; i < config.query_count; ++i) {
        QueryRecord q;
        q.query = i;
        try {
            std::mt19937_64 rng(stream_seed(config.seed, i));
            RouteResult P;
            for (int attempt = 0;; ++attempt) {
                if (attempt == 10000) throw InvalidInput("no query pair at the requested distance");
                q.src = pick(rng);
                q.dst = pick(rng);
                if (q.src == q.dst) continue;
                P = bidirectional_s_dijkstra(network, scope, q.src, q.dst);
                if (P.reachable && P.cost >= rep.distance_threshold && !P.walk.empty()) break;
            }
            q.static_w = P.cost;
            q.scanned_static = P.scanned();
            auto placed = place_random_closures(network, scope, P.walk, config.closure_count, rng());
            if (placed.warning) rep.warnings.push_back("query " + std::to_string(i) + ": " + *placed.warning);
            const auto& C = placed.closures;
            const RoadNetwork g = apply_closures(network, C);
            q.static_wstar = walk_weight(g, P.walk, Weighting::Updated);

            if (config.run_simple) {
                DetourResult r;
                auto run = [&] { r = simple_detour_route(g, scope, C, q.src, q.dst); };
                if (config.timing) {
                    q.ms_simple = median_ms(config.repetitions, run);
                } else {
                    run();
                }
                q.simple_wstar = r.cost;
                q.simple_class = r.cls;
                q.scanned_simple = r.stats.scanned_detour;
                q.scanned_obstruction = r.stats.scanned_obstruction;
                q.permits = r.stats.permits;
                q.validated = q.validated && result_valid(g, scope, C, r, q.src, q.dst) && r.cost <= q.static_wstar;
            }
            if (config.run_enhanced) {
                DetourResult r;
                auto run = [&] { r = enhanced_detour_route(g, scope, C, q.src, q.dst); };
                if (config.timing) {
                    q.ms_enhanced = median_ms(config.repetitions, run);
                } else {
                    run();
                }
                q.enhanced_wstar = r.cost;
                q.enhanced_class = r.cls;
                q.scanned_enhanced = r.stats.scanned_detour;
                q.qc_edges = r.stats.qc_edges;
                q.qc_iters = r.stats.qc_iterations;
                const auto star = qc_closure(g, scope, C, q.src, q.dst);
                q.validated = q.validated && result_valid(g, scope, star, r, q.src, q.dst) && r.cost <= q.static_wstar;
            }
            if (config.compare_contracted) {
                std::vector<EdgeId> closed;
                for (EdgeId e = 0; e < contracted.network.edge_count(); ++e) {
                    const auto& chain = contracted.expansion[e];
                    if (std::any_of(chain.begin(), chain.end(), [&](EdgeId o) { return C.blocks(o); }))
                        closed.push_back(e);
                }
                auto cc = ClosureSet::of(contracted.network.edge_count(), closed);
                auto star = qc_closure(contracted.network, contracted.scope, cc, contracted.vertex_map[q.src],
                                       contracted.vertex_map[q.dst]);
                q.qc_edges_contracted = star.quasi_count();
            }
        } catch (const std::exception& e) {
            q.error = e.what();
        }
        rep.records.push_back(std::move(q));
    }
    return rep;
}

void write_csv(std::ostream& out, const BenchReport& report) {
    const bool contracted = report.config.compare_contracted;
    out << "query,src,dst,static_w,static_wstar,simple_wstar,enhanced_wstar,scanned_static,scanned_simple,"
           "scanned_enhanced,permits,qc_edges,qc_iters,ms_simple,ms_enhanced";
    if (contracted) out << ",qc_edges_contracted";
    out << '\n';
    auto ms = [&](double x) {
        if (!report.config.timing) return std::string();
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << x;
        return s.str();
    };
    for (const auto& q : report.records) {
        if (!q.error.empty()) {
            out << q.query << ",,,,,,,,,,,,,,";
            if (contracted) out << ',';
            out << '\n';
            continue;
        }
        out << q.query << ',' << q.src << ',' << q.dst << ',' << format_number(q.static_w) << ','
            << format_number(q.static_wstar) << ',' << format_number(q.simple_wstar) << ','
            << format_number(q.enhanced_wstar) << ',' << q.scanned_static << ',' << q.scanned_simple << ','
            << q.scanned_enhanced << ',' << q.permits << ',' << q.qc_edges << ',' << q.qc_iters << ','
            << ms(q.ms_simple) << ',' << ms(q.ms_enhanced);
        if (contracted) out << ',' << (q.qc_edges_contracted ? std::to_string(*q.qc_edges_contracted) : "");
        out << '\n';
    }
}

BenchSummary summarize(const BenchReport& report) {
    BenchSummary s;
    s.queries = report.records.size();
    std::size_t ok = 0, contracted = 0;
    double qcc = 0;
    for (const auto& q : report.records) {
        if (!q.error.empty()) {
            ++s.failures;
            continue;
        }
        ++ok;
        s.invalid += !q.validated;
        s.simple_found += q.simple_wstar < kInf;
        s.enhanced_found += q.enhanced_wstar < kInf;
        if (q.simple_wstar < kInf && q.enhanced_wstar < kInf && q.enhanced_wstar > q.simple_wstar)
            ++s.enhanced_worse;
        s.mean_ms_simple += q.ms_simple;
        s.mean_ms_enhanced += q.ms_enhanced;
        s.mean_scanned_static += double(q.scanned_static);
        s.mean_scanned_simple += double(q.scanned_simple);
        s.mean_scanned_enhanced += double(q.scanned_enhanced);
        s.mean_scanned_obstruction += double(q.scanned_obstruction);
        s.mean_permits += double(q.permits);
        s.mean_qc_edges += double(q.qc_edges);
        s.max_qc_edges = std::max(s.max_qc_edges, q.qc_edges);
        s.max_qc_iters = std::max(s.max_qc_iters, q.qc_iters);
        if (q.qc_edges_contracted) {
            ++contracted;
            qcc += double(*q.qc_edges_contracted);
        }
    }
    if (ok > 0) {
        for (double* x : {&s.mean_ms_simple, &s.mean_ms_enhanced, &s.mean_scanned_static, &s.mean_scanned_simple,
                          &s.mean_scanned_enhanced, &s.mean_scanned_obstruction, &s.mean_permits, &s.mean_qc_edges})
            *x /= double(ok);
    }
    if (s.mean_scanned_static > 0) s.scanned_overhead = s.mean_scanned_simple / s.mean_scanned_static - 1;
    if (contracted > 0) s.mean_qc_edges_contracted = qcc / double(contracted);
    return s;
}

void write_summary(std::ostream& out, const BenchReport& report) {
    const auto s = summarize(report);
    const auto& c = report.config;
    out << std::fixed << std::setprecision(3);
    out << "network: " << report.vertices << " vertices, " << report.edges << " edges\n";
    out << "queries: " << s.queries << " (seed " << c.seed << ", " << c.closure_count << " closures each, "
        << "distance threshold " << format_number(report.distance_threshold) << ")\n";
    out << "failures: " << s.failures << ", validator rejections: " << s.invalid << '\n';
    out << "routes found: simple " << s.simple_found << ", enhanced " << s.enhanced_found << '\n';
    out << "enhanced costlier than simple: " << s.enhanced_worse << '\n';
    out << "mean scanned: static " << s.mean_scanned_static << ", simple " << s.mean_scanned_simple
        << ", enhanced " << s.mean_scanned_enhanced << " (overhead " << 100 * s.scanned_overhead << "%)\n";
    out << "mean scanned by obstruction preprocessing: " << s.mean_scanned_obstruction << '\n';
    out << "mean permits: " << s.mean_permits << '\n';
    out << "quasi-closures: mean " << s.mean_qc_edges << ", max " << s.max_qc_edges << "; qc iterations max "
        << s.max_qc_iters << '\n';
    if (s.mean_qc_edges_contracted)
        out << "quasi-closures after contraction: mean " << *s.mean_qc_edges_contracted << '\n';
    if (c.timing)
        out << "mean ms (median of " << c.repetitions << "): simple " << s.mean_ms_simple << ", enhanced "
            << s.mean_ms_enhanced << '\n';
    for (const auto& w : report.warnings) out << "warning: " << w << '\n';
}

}  // namespace scope
