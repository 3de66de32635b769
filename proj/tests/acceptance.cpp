// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to scoperoute> [criterion ...]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>

#include <unistd.h>

#include "fixtures.hpp"
#include "scope/bench.hpp"
#include "scope/detour.hpp"
#include "scope/full.hpp"
#include "scope/io.hpp"

using namespace scope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string join(const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) s += (s.empty() ? "" : "; ") + x;
    return s;
}

// Collects the first few failure descriptions and a total count.
class Failures {
public:
    void add(const std::string& what) {
        ++count_;
        if (shown_.size() < 3) shown_.push_back(what);
    }
    std::size_t count() const { return count_; }
    std::string text() const { return count_ ? std::to_string(count_) + " failures: " + join(shown_) : ""; }

private:
    std::size_t count_ = 0;
    std::vector<std::string> shown_;
};

VertexId pick_vertex(fixtures::Random& r, const RoadNetwork& g) {
    return VertexId(r.uniform(0, int(g.vertex_count()) - 1));
}

// 1. Static search against the enumerative brute force.
Outcome oracle_equivalence() {
    fixtures::Random r(1001);
    Failures f;
    for (int i = 0; i < 500; ++i) {
        auto inst = fixtures::random_instance(r, 12, 30, r.uniform(2, 3), 20);
        const VertexId s = pick_vertex(r, inst.net), t = pick_vertex(r, inst.net);
        const std::size_t hops = inst.net.vertex_count();
        auto uni = s_dijkstra(inst.net, inst.scope, s);
        auto bi = bidirectional_s_dijkstra(inst.net, inst.scope, s, t);
        auto bs = brute_force_optimal_admissible(inst.net, inst.scope, s, t, hops, AdmissibilityKind::SourceOnly);
        auto bb = brute_force_optimal_admissible(inst.net, inst.scope, s, t, hops, AdmissibilityKind::Split);
        const std::string id = "instance " + std::to_string(i);
        if (bs.status == BruteStatus::BudgetExceeded || bb.status == BruteStatus::BudgetExceeded)
            f.add(id + ": brute force budget exceeded");
        else if (uni.dist[t] != bs.cost)
            f.add(id + ": s_dijkstra " + format_number(uni.dist[t]) + " vs " + format_number(bs.cost));
        else if (bi.cost != bb.cost)
            f.add(id + ": bidirectional " + format_number(bi.cost) + " vs " + format_number(bb.cost));
    }
    return {f.count() == 0, f.count() ? f.text() : "500 networks, exact match"};
}

// 2. All edges unbounded: scope search is classical Dijkstra.
Outcome degenerate_reduction() {
    fixtures::Random r(1002);
    Failures f;
    for (int i = 0; i < 100; ++i) {
        auto inst = fixtures::random_instance(r, 60, 240, 3, 20);
        std::vector<Level> top(inst.net.edge_count(), inst.scope.top());
        ScopeMapping all_top(top, std::vector<double>(inst.scope.nus().begin(), inst.scope.nus().end()));
        const VertexId s = pick_vertex(r, inst.net);
        if (s_dijkstra(inst.net, all_top, s).dist != dijkstra(inst.net, s).dist)
            f.add("instance " + std::to_string(i));
    }
    return {f.count() == 0, f.count() ? f.text() : "100 instances, identical distance arrays"};
}

// Random instance whose static optimum is hit by a closure.
struct Closed {
    fixtures::Instance inst;
    ClosureSet closures;
    VertexId s, t;
};

std::optional<Closed> closed_instance(fixtures::Random& r, int max_v, int max_e) {
    auto inst = fixtures::random_instance(r, max_v, max_e, r.uniform(2, 3), 20);
    const VertexId s = pick_vertex(r, inst.net), t = pick_vertex(r, inst.net);
    auto P = bidirectional_s_dijkstra(inst.net, inst.scope, s, t);
    if (!P.reachable || P.walk.empty()) return std::nullopt;
    std::vector<EdgeId> c{P.walk.edges[r.uniform(0, int(P.walk.size()) - 1)]};
    for (int k = r.uniform(0, 2); k > 0; --k) c.push_back(EdgeId(r.uniform(0, int(inst.net.edge_count()) - 1)));
    auto cs = ClosureSet::of(inst.net.edge_count(), c);
    return Closed{{apply_closures(inst.net, cs), inst.scope}, cs, s, t};
}

// 3. Simple detour cost equals the brute-force minimum under the validator.
Outcome simple_detour_optimality() {
    fixtures::Random r(1003);
    Failures f;
    int done = 0, detours = 0, unreachable = 0;
    while (done < 300) {
        auto c = closed_instance(r, 12, 30);
        if (!c) continue;
        const std::string id = "instance " + std::to_string(done);
        ++done;
        const auto& g = c->inst.net;
        const auto& sc = c->inst.scope;
        auto res = simple_detour_route(g, sc, c->closures, c->s, c->t);
        auto ctx = make_detour_context(g, sc, c->closures, c->s, c->t, ObstructionBackend::Enumerate);
        // Weights are at least 1, so a walk within the route's cost has at most
        // that many edges; without a route the search runs to a hop bound.
        const double bound = res.reachable() ? res.cost : kInf;
        const std::size_t hops = res.reachable() ? std::size_t(res.cost) : 5 * g.vertex_count();
        auto brute = brute_force_simple_detour(g, sc, ctx, bound, hops, 20'000'000);
        if (brute.status == BruteStatus::BudgetExceeded) {
            f.add(id + ": brute force budget exceeded");
            continue;
        }
        if (brute.cost != res.cost) {
            f.add(id + ": route " + format_number(res.cost) + " vs brute force " + format_number(brute.cost));
            continue;
        }
        if (res.reachable() && !validate_simple_detour(g, sc, ctx, res.walk)) f.add(id + ": walk rejected");
        detours += res.cls == DetourClass::SimpleDetour;
        unreachable += !res.reachable();
    }
    std::ostringstream d;
    d << "300 instances (" << detours << " detours, " << unreachable << " unreachable)";
    return {f.count() == 0, f.count() ? f.text() : d.str()};
}

// 4. qc is extensive, idempotent and monotone; dead-end fixture.
Outcome qc_laws() {
    fixtures::Random r(1004);
    Failures f;
    for (int i = 0; i < 200; ++i) {
        auto inst = fixtures::random_instance(r, 12, 30, r.uniform(2, 3), 20);
        const VertexId s = pick_vertex(r, inst.net), t = pick_vertex(r, inst.net);
        std::vector<EdgeId> c1, c2;
        for (EdgeId e = 0; e < inst.net.edge_count(); ++e)
            if (r.coin(0.15)) c1.push_back(e);
        c2 = c1;
        for (EdgeId e = 0; e < inst.net.edge_count(); ++e)
            if (r.coin(0.1)) c2.push_back(e);
        auto C1 = ClosureSet::of(inst.net.edge_count(), c1);
        auto C2 = ClosureSet::of(inst.net.edge_count(), c2);
        auto q1 = qc_closure(inst.net, inst.scope, C1, s, t);
        auto q2 = qc_closure(inst.net, inst.scope, C2, s, t);
        auto qq = qc_closure(inst.net, inst.scope, q1, s, t);
        for (EdgeId e = 0; e < inst.net.edge_count(); ++e) {
            const std::string id = "instance " + std::to_string(i) + " edge " + std::to_string(e);
            if (C1.blocks(e) && !q1.blocks(e)) f.add(id + ": not extensive");
            if (q1.blocks(e) && !q2.blocks(e)) f.add(id + ": not monotone");
            if (qq.blocks(e) != q1.blocks(e)) f.add(id + ": not idempotent");
        }
    }
    // s=0 x=1 y=2 t=3: one-way x->y feeds the closed y->t; x also has a bypass.
    std::vector<EdgeSpec> es{{0, 1, 10}, {1, 2, 10}, {2, 3, 10}, {1, 4, 5}, {4, 5, 10}, {5, 3, 10}};
    RoadNetwork g(6, es);
    ScopeMapping sc({1, 1, 1, 0, 1, 1}, {5, kInf});
    auto C = ClosureSet::of(g.edge_count(), {2});
    auto star = qc_closure(apply_closures(g, C), sc, C, 0, 3);
    std::vector<EdgeId> blocked;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (star.blocks(e)) blocked.push_back(e);
    if (blocked != std::vector<EdgeId>{1, 2} || star.iterations != 2)
        f.add("dead-end fixture: " + std::to_string(blocked.size()) + " blocked edges, " +
              std::to_string(star.iterations) + " iterations");
    return {f.count() == 0, f.count() ? f.text() : "200 instances; fixture C* = {(y,t),(x,y)} in 2 iterations"};
}

// 5. Proper scope and a C-avoiding walk imply an enhanced detour.
Outcome enhanced_existence() {
    fixtures::Random r(1005);
    Failures f;
    int done = 0, draws = 0;
    while (done < 200) {
        ++draws;
        auto inst = fixtures::random_instance(r, 12, 30, r.uniform(2, 3), 20);
        if (!is_routing_connected(inst.net)) continue;
        const ScopeMapping sc = balance_to_proper(inst.net, inst.scope);
        const VertexId s = pick_vertex(r, inst.net), t = pick_vertex(r, inst.net);
        auto P = bidirectional_s_dijkstra(inst.net, sc, s, t);
        if (P.walk.empty()) continue;
        std::vector<EdgeId> c{P.walk.edges[r.uniform(0, int(P.walk.size()) - 1)]};
        for (int k = r.uniform(0, 3); k > 0; --k) c.push_back(EdgeId(r.uniform(0, int(inst.net.edge_count()) - 1)));
        auto C = ClosureSet::of(inst.net.edge_count(), c);
        SearchOptions o;
        o.excluded = C.blocking_mask();
        if (!dijkstra(inst.net, s, o).reached(t)) continue;
        ++done;
        auto res = enhanced_detour_route(apply_closures(inst.net, C), sc, C, s, t);
        if (!res.reachable()) {
            std::ostringstream d;
            d << "network " << done << " (" << inst.net.vertex_count() << " vertices, s=" << s << ", t=" << t
              << ", closures";
            for (EdgeId e : c) d << ' ' << e;
            d << ")";
            f.add(d.str());
        }
    }
    return {f.count() == 0, f.count() ? f.text() : "200 proper networks, enhanced route found in every case"};
}

std::optional<Walk> random_walk(fixtures::Random& r, const RoadNetwork& g, VertexId s, int max_len) {
    Walk w{s, {}};
    VertexId at = s;
    const int len = r.uniform(1, max_len);
    for (int i = 0; i < len; ++i) {
        auto out = g.out_edges(at);
        if (out.empty()) break;
        const EdgeId e = out[r.uniform(0, int(out.size()) - 1)];
        w.edges.push_back(e);
        at = g.edge(e).head;
    }
    if (w.empty()) return std::nullopt;
    return w;
}

// Only the endpoint anchors, with the single breakpoint being the split.
bool empty_decomposition(const FullVerdict& v) {
    return v.witness && v.witness->forward.size() == 1 && v.witness->reverse.size() == 1 &&
           v.witness->breakpoints.size() == 1;
}

// 6. With no closures the full definition is plain admissibility; admissible
//    walks avoiding the closures are accepted as they are.
Outcome full_consistency() {
    fixtures::Random r(1006);
    Failures f;
    int samples = 0, admissible = 0, avoided = 0;
    while (samples < 1000) {
        auto inst = fixtures::random_instance(r, 8, 18, 3, 20);
        // Tight scope values; random walks are otherwise nearly always admissible.
        const double nu0 = r.uniform(0, 10);
        inst.scope = ScopeMapping(std::vector<Level>(inst.scope.levels().begin(), inst.scope.levels().end()),
                                  {nu0, nu0 + r.uniform(1, 20), kInf});
        const VertexId s = pick_vertex(r, inst.net);
        auto w = random_walk(r, inst.net, s, 8);
        if (!w) continue;
        const VertexId t = walk_end(inst.net, *w);
        const bool plain = validate_S_admissible(inst.net, inst.scope, *w, s, t);
        // Thin out admissible walks so both verdicts are well represented.
        if (plain && !r.coin(0.1)) continue;
        const std::string id = "sample " + std::to_string(samples);
        ++samples;
        auto v = validate_full_detour(inst.net, inst.scope, ClosureSet::none(inst.net.edge_count()), *w, s, t);
        if (v.verdict == Verdict::Indeterminate) {
            f.add(id + ": indeterminate");
            continue;
        }
        if (v.accepted() != plain) f.add(id + ": full " + to_string(v.verdict) + ", plain " + (plain ? "valid" : "invalid"));
        if (!plain) continue;
        ++admissible;
        if (!empty_decomposition(v)) f.add(id + ": accepted without the empty decomposition");
        // Same walk with closures elsewhere.
        std::vector<EdgeId> c;
        for (EdgeId e = 0; e < inst.net.edge_count(); ++e)
            if (std::find(w->edges.begin(), w->edges.end(), e) == w->edges.end() && r.coin(0.2)) c.push_back(e);
        if (c.empty()) continue;
        ++avoided;
        auto C = ClosureSet::of(inst.net.edge_count(), c);
        auto vc = validate_full_detour(apply_closures(inst.net, C), inst.scope, C, *w, s, t);
        if (!vc.accepted() || !empty_decomposition(vc)) f.add(id + ": closure-avoiding walk " + to_string(vc.verdict));
    }
    std::ostringstream d;
    d << "1000 samples (" << admissible << " admissible, " << avoided << " rechecked with closures)";
    return {f.count() == 0, f.count() ? f.text() : d.str()};
}

// 7. Benchmark on a ~10k-edge synthetic network.
Outcome paper_scale(BenchReport* keep) {
    const auto net = generate_synthetic(SyntheticKind::Grid, 46, 3, 1);
    BenchConfig cfg;
    cfg.query_count = 500;
    cfg.closure_count = 50;
    cfg.seed = 1;
    cfg.repetitions = 3;
    cfg.compare_contracted = true;
    auto rep = run_benchmark(net.network, net.scope, cfg);
    const auto s = summarize(rep);
    std::vector<std::string> bad;
    if (s.failures || s.invalid)
        bad.push_back(std::to_string(s.failures) + " failed, " + std::to_string(s.invalid) + " invalid queries");
    const double ms = std::max(s.mean_ms_simple, s.mean_ms_enhanced);
    if (!(ms < 100)) bad.push_back("(a) mean time " + format_number(ms) + " ms");
    if (!(s.max_qc_iters <= 5)) bad.push_back("(b) qc iterations " + std::to_string(s.max_qc_iters));
    const double overhead = std::max(s.mean_scanned_simple, s.mean_scanned_enhanced) / s.mean_scanned_static - 1;
    if (!(overhead < 0.5)) bad.push_back("(c) overhead " + format_number(100 * overhead) + "%");
    if (!s.mean_qc_edges_contracted || !(*s.mean_qc_edges_contracted < s.mean_qc_edges))
        bad.push_back("(d) contracted quasi-closures not below uncontracted");
    std::ostringstream d;
    d.precision(3);
    d << std::fixed << rep.edges << " edges, 500 queries: (a) " << s.mean_ms_simple << "/" << s.mean_ms_enhanced
      << " ms simple/enhanced; (b) qc iterations max " << s.max_qc_iters << "; (c) scanned overhead "
      << 100 * overhead << "% (static " << s.mean_scanned_static << ", detour " << s.mean_scanned_simple
      << ", obstruction preprocessing " << s.mean_scanned_obstruction << "); (d) quasi-closures " << s.mean_qc_edges
      << " -> " << s.mean_qc_edges_contracted.value_or(-1) << " after contraction";
    if (keep) *keep = std::move(rep);
    return {bad.empty(), bad.empty() ? d.str() : join(bad) + " | " + d.str()};
}

// 8. Every subcommand and the full benchmark, run twice.
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
    if (cli.empty()) return {false, "no CLI path given"};
    const fs::path dir = fs::temp_directory_path() / ("scope-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto p = [&](const std::string& name) { return (dir / name).string(); };
    Failures f;

    auto run = [&](const std::string& name, const std::string& args, const std::string& out_file = "") {
        std::vector<std::string> runs;
        int codes[2];
        for (int i = 0; i < 2; ++i) {
            const std::string stdout_file = p(name + ".stdout" + std::to_string(i));
            const std::string cmd = "'" + cli + "' " + args + " > '" + stdout_file + "' 2>&1";
            codes[i] = std::system(cmd.c_str());
            std::string bytes = slurp(stdout_file);
            if (!out_file.empty()) bytes += "\n--out--\n" + slurp(out_file);
            runs.push_back(bytes);
        }
        if (codes[0] != codes[1] || runs[0] != runs[1]) f.add(name + " differs between runs");
        if (runs[0].find("error:") != std::string::npos) f.add(name + " failed: " + runs[0].substr(0, 200));
    };

    run("gen", "gen --size 12 --levels 3 --seed 4 --out " + p("g.net"), p("g.net"));
    run("gen-random", "gen --kind random --size 80 --levels 3 --seed 4 --out " + p("r.net"), p("r.net"));

    // Closure on the middle of a static route, plus a few top-level edges.
    const auto file = load_network(p("g.net"));
    const VertexId s = 0, t = VertexId(file.network.vertex_count() - 1);
    auto P = bidirectional_s_dijkstra(file.network, file.scope, s, t);
    if (!P.reachable) return {false, "generated network has no static route"};
    auto placed = place_random_closures(file.network, file.scope, P.walk, 4, 9);
    {
        std::ofstream c(p("c.txt"));
        for (EdgeId e : placed.edges) c << e << "\n";
    }
    const std::string q = " --network " + p("g.net") + " --closures " + p("c.txt") + " --source " +
                          std::to_string(s) + " --target " + std::to_string(t);
    run("route", "route --network " + p("g.net") + " --source 0 --target " + std::to_string(t));
    run("route-geojson", "route --network " + p("g.net") + " --source 0 --target " + std::to_string(t) +
                             " --format geojson");
    run("detour-simple", "detour --mode simple" + q);
    run("detour-enhanced", "detour --mode enhanced --format csv" + q);
    run("qc", "qc" + q);

    auto g = apply_closures(file.network, placed.closures);
    auto D = enhanced_detour_route(g, file.scope, placed.closures, s, t);
    if (!D.reachable()) return {false, "no detour on the generated network"};
    {
        std::ofstream w(p("w.txt"));
        write_walk(w, D.walk);
    }
    for (int def : {3, 5, 7})
        run("validate-" + std::to_string(def),
            "validate --def " + std::to_string(def) + " --walk " + p("w.txt") + q);
    // The full validator is exponential; a small network with a closed highway.
    {
        std::ofstream n(p("small.net"));
        n << "V 5\nL 0:5 inf:inf\nE 0 1 10 inf\nE 1 2 10 inf\nE 2 3 10 inf\nE 1 4 6 0\nE 4 2 6 0\n";
        std::ofstream c(p("small-c.txt"));
        c << "1\n";
        std::ofstream w(p("small-w.txt"));
        w << "0 0 3 4 2\n";
    }
    run("validate-9", "validate --def 9 --network " + p("small.net") + " --closures " + p("small-c.txt") +
                          " --walk " + p("small-w.txt"));
    run("bench-small", "bench --network " + p("g.net") + " --queries 5 --closure-count 5 --seed 3 --no-timing --out " +
                           p("b.csv"),
        p("b.csv"));
    run("bench-full", "bench --size 46 --levels 3 --seed 1 --queries 500 --closure-count 50 --no-timing --contracted "
                      "--out " + p("full.csv"),
        p("full.csv"));

    fs::remove_all(dir);
    return {f.count() == 0, f.count() ? f.text() : "gen, route, detour, qc, validate 3/5/7/9, bench and the "
                                                   "500-query benchmark byte-identical across two runs"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    std::set<int> only;
    for (int i = 2; i < argc; ++i) only.insert(std::stoi(argv[i]));

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "oracle equivalence", oracle_equivalence},
        {2, "degenerate reduction", degenerate_reduction},
        {3, "simple detour optimality", simple_detour_optimality},
        {4, "quasi-closure laws", qc_laws},
        {5, "enhanced detour existence", enhanced_existence},
        {6, "full admissibility consistency", full_consistency},
        {7, "benchmark reproduction", [] { return paper_scale(nullptr); }},
        {8, "determinism", [&] { return determinism(cli); }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("criterion %d %s: %s (%.1f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
