#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "scope/bench.hpp"
#include "scope/full.hpp"
#include "scope/io.hpp"

using namespace scope;

namespace {

constexpr int kUnreachable = 2;

struct Options {
    std::string network, closures, walk, out, format = "text", mode = "simple", kind = "grid";
    std::optional<VertexId> source, target;
    std::uint64_t seed = 1;
    int def = 3;
    std::size_t size = 46, levels = 3, queries = 500, closure_count = 50, repetitions = 5;
    double nu_step = 60;
    bool no_timing = false, contracted = false, balance = true;
};

// Output goes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InvalidInput("cannot write " + path);
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct Loaded {
    NetworkFile file;
    RoadNetwork network;  ///< with w* from the closure file
    ClosureSet closures;
};

Loaded load(const Options& o, bool need_closures) {
    if (o.network.empty()) throw InvalidInput("--network is required");
    Loaded l;
    l.file = load_network(o.network);
    l.network = l.file.network;
    if (!o.closures.empty()) {
        l.network = load_closures(o.closures, l.file.network);
    } else if (need_closures) {
        throw InvalidInput("--closures is required");
    }
    l.closures = derive_closures(l.network);
    return l;
}

std::pair<VertexId, VertexId> endpoints(const Options& o) {
    if (!o.source || !o.target) throw InvalidInput("--source and --target are required");
    return {*o.source, *o.target};
}

void print_walk(std::ostream& out, const Loaded& l, const Walk& w, const std::vector<bool>& permits,
                const std::string& format) {
    if (format == "csv") {
        export_route(out, w, l.network, l.file.scope, l.file.coords, permits, RouteFormat::Csv);
    } else if (format == "geojson") {
        export_route(out, w, l.network, l.file.scope, l.file.coords, permits, RouteFormat::GeoJson);
    } else {
        out << "walk:";
        write_walk(out << ' ', w);
    }
}

int cmd_route(const Options& o) {
    auto l = load(o, false);
    auto [s, t] = endpoints(o);
    auto r = bidirectional_s_dijkstra(l.network, l.file.scope, s, t);
    Sink sink(o.out);
    auto& out = sink.get();
    if (!r.reachable) {
        out << "unreachable\n";
        return kUnreachable;
    }
    SearchOptions ro;
    ro.direction = Direction::Reverse;
    auto f = s_dijkstra(l.network, l.file.scope, s);
    auto b = s_dijkstra(l.network, l.file.scope, t, ro);
    if (!split_admissible(l.network, r.walk, f.relaxed, b.relaxed)) throw std::logic_error("route failed validation");
    if (o.format == "text") {
        out << "cost " << format_number(r.cost) << "\n";
        if (l.network.has_updates())
            out << "cost under closures " << format_number(walk_weight(l.network, r.walk, Weighting::Updated)) << "\n";
        out << "scanned " << r.scanned() << "\n";
    }
    print_walk(out, l, r.walk, {}, o.format);
    return 0;
}

int cmd_detour(const Options& o) {
    auto l = load(o, true);
    auto [s, t] = endpoints(o);
    const bool enhanced = o.mode == "enhanced";
    auto r = enhanced ? enhanced_detour_route(l.network, l.file.scope, l.closures, s, t)
                      : simple_detour_route(l.network, l.file.scope, l.closures, s, t);
    Sink sink(o.out);
    auto& out = sink.get();
    if (!r.reachable()) {
        out << "unreachable\n";
        return kUnreachable;
    }
    const ClosureSet used = enhanced ? qc_closure(l.network, l.file.scope, l.closures, s, t) : l.closures;
    auto ctx = make_detour_context(l.network, l.file.scope, used, s, t);
    if (!validate_simple_detour(l.network, l.file.scope, ctx, r.walk))
        throw std::logic_error("detour failed validation");
    if (o.format == "text") {
        out << "class " << to_string(r.cls) << "\n";
        out << "cost " << format_number(r.cost) << "\n";
        out << "static cost " << format_number(r.static_w) << ", under closures " << format_number(r.static_wstar)
            << "\n";
        out << "permits " << r.stats.permits << "\n";
        out << "scanned static " << r.stats.scanned_static << ", detour " << r.stats.scanned_detour
            << ", obstruction " << r.stats.scanned_obstruction << "\n";
        if (enhanced) out << "quasi-closures " << r.stats.qc_edges << ", iterations " << r.stats.qc_iterations << "\n";
    }
    print_walk(out, l, r.walk, r.permit_edges, o.format);
    return 0;
}

int cmd_qc(const Options& o) {
    auto l = load(o, true);
    auto [s, t] = endpoints(o);
    auto star = qc_closure(l.network, l.file.scope, l.closures, s, t);
    Sink sink(o.out);
    auto& out = sink.get();
    out << "iterations " << star.iterations << "\n";
    for (EdgeId e : star.members()) {
        const Edge& ed = l.network.edge(e);
        const char* tag = star.tag[e] == ClosureTag::Closed
                              ? (star.hard[e] ? "closed" : "slowed")
                              : (star.tag[e] == ClosureTag::QuasiForTarget ? "quasi-target" : "quasi-start");
        out << e << ' ' << ed.tail << ' ' << ed.head << ' ' << tag << "\n";
    }
    return 0;
}

int cmd_validate(const Options& o) {
    auto l = load(o, o.def != 3);
    if (o.walk.empty()) throw InvalidInput("--walk is required");
    const Walk w = load_walk(o.walk, l.network);
    const VertexId s = o.source.value_or(w.start);
    const VertexId t = o.target.value_or(walk_end(l.network, w));
    const auto& sc = l.file.scope;
    Sink sink(o.out);
    auto& out = sink.get();
    std::string verdict;
    switch (o.def) {
        case 3: {
            if (w.start != s || walk_end(l.network, w) != t) throw InvalidInput("walk is not an s-t walk");
            verdict = validate_S_admissible(l.network, sc, w, s, t) ? "valid" : "invalid";
            break;
        }
        case 5:
        case 7: {
            if (w.start != s || walk_end(l.network, w) != t) throw InvalidInput("walk is not an s-t walk");
            const ClosureSet c = o.def == 7 ? qc_closure(l.network, sc, l.closures, s, t) : l.closures;
            const auto ctx = make_detour_context(l.network, sc, c, s, t, ObstructionBackend::Search);
            verdict = validate_simple_detour(l.network, sc, ctx, w) ? "valid" : "invalid";
            break;
        }
        case 9: {
            auto v = validate_full_detour(l.network, sc, l.closures, w, s, t);
            verdict = v.verdict == Verdict::Accepted ? "valid" : v.verdict == Verdict::Rejected ? "invalid" : "indeterminate";
            out << verdict << "\n";
            if (v.witness) {
                auto list = [&](const char* name, const std::vector<std::size_t>& xs) {
                    out << name;
                    for (auto x : xs) out << ' ' << x;
                    out << "\n";
                };
                list("forward anchors", v.witness->forward);
                list("reverse anchors", v.witness->reverse);
                list("breakpoints", v.witness->breakpoints);
            }
            return 0;
        }
        default:
            throw InvalidInput("--def must be 3, 5, 7 or 9");
    }
    out << verdict << "\n";
    return 0;
}

int cmd_bench(const Options& o) {
    NetworkFile f = o.network.empty()
                        ? generate_synthetic(o.kind == "random" ? SyntheticKind::Random : SyntheticKind::Grid, o.size,
                                             o.levels, o.seed, o.nu_step)
                        : load_network(o.network);
    if (o.balance && !is_proper(f.network, f.scope)) f.scope = balance_to_proper(f.network, f.scope);
    BenchConfig c;
    c.query_count = o.queries;
    c.closure_count = o.closure_count;
    c.seed = o.seed;
    c.timing = !o.no_timing;
    c.repetitions = o.repetitions;
    c.compare_contracted = o.contracted;
    auto report = run_benchmark(f.network, f.scope, c);
    if (!o.out.empty()) {
        Sink sink(o.out);
        write_csv(sink.get(), report);
    }
    write_summary(std::cout, report);
    return 0;
}

int cmd_gen(const Options& o) {
    auto f = generate_synthetic(o.kind == "random" ? SyntheticKind::Random : SyntheticKind::Grid, o.size, o.levels,
                                o.seed, o.nu_step);
    if (o.balance) f.scope = balance_to_proper(f.network, f.scope);
    Sink sink(o.out);
    write_network(sink.get(), f);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scope-based route planning with road closures"};
    app.require_subcommand(1);
    Options o;

    auto add_network = [&](CLI::App* c) { c->add_option("--network", o.network, "network file")->check(CLI::ExistingFile); };
    auto add_closures = [&](CLI::App* c) { c->add_option("--closures", o.closures, "closure file")->check(CLI::ExistingFile); };
    auto add_endpoints = [&](CLI::App* c) {
        c->add_option("--source", o.source, "start vertex");
        c->add_option("--target", o.target, "target vertex");
    };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", o.out, "output file (default stdout)"); };
    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", o.format, "text, csv or geojson")->check(CLI::IsMember({"text", "csv", "geojson"}));
    };

    auto* route = app.add_subcommand("route", "static scope-admissible route");
    add_network(route);
    add_closures(route);
    add_endpoints(route);
    add_format(route);
    add_out(route);

    auto* detour = app.add_subcommand("detour", "route around closures");
    add_network(detour);
    add_closures(detour);
    add_endpoints(detour);
    add_format(detour);
    add_out(detour);
    detour->add_option("--mode", o.mode, "simple or enhanced")->check(CLI::IsMember({"simple", "enhanced"}));

    auto* qc = app.add_subcommand("qc", "closure set extended by quasi-closures");
    add_network(qc);
    add_closures(qc);
    add_endpoints(qc);
    add_out(qc);

    auto* validate = app.add_subcommand("validate", "check a walk file against a definition");
    add_network(validate);
    add_closures(validate);
    add_endpoints(validate);
    add_out(validate);
    validate->add_option("--walk", o.walk, "walk file")->check(CLI::ExistingFile);
    validate->add_option("--def", o.def, "3 admissible, 5 simple detour, 7 enhanced detour, 9 full detour")
        ->check(CLI::IsMember({3, 5, 7, 9}));

    auto* bench = app.add_subcommand("bench", "closure benchmark over random queries");
    add_network(bench);
    add_out(bench);
    bench->add_option("--seed", o.seed, "random seed");
    bench->add_option("--queries", o.queries, "query count");
    bench->add_option("--closure-count", o.closure_count, "closures per query");
    bench->add_option("--repetitions", o.repetitions, "timed runs per query");
    bench->add_flag("--no-timing", o.no_timing, "leave timing columns empty");
    bench->add_flag("--contracted", o.contracted, "also count quasi-closures after chain contraction");
    bench->add_option("--kind", o.kind, "generated network kind when --network is absent")
        ->check(CLI::IsMember({"grid", "random"}));
    bench->add_option("--size", o.size, "generated network size");
    bench->add_option("--levels", o.levels, "generated level count");
    bench->add_option("--nu-step", o.nu_step, "generated scope value step");

    auto* gen = app.add_subcommand("gen", "write a synthetic network");
    add_out(gen);
    gen->add_option("--seed", o.seed, "random seed");
    gen->add_option("--kind", o.kind, "grid or random")->check(CLI::IsMember({"grid", "random"}));
    gen->add_option("--size", o.size, "grid side or vertex count");
    gen->add_option("--levels", o.levels, "level count");
    gen->add_option("--nu-step", o.nu_step, "scope value step");
    gen->add_flag("!--no-balance", o.balance, "keep generated levels even if not proper");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*route) return cmd_route(o);
        if (*detour) return cmd_detour(o);
        if (*qc) return cmd_qc(o);
        if (*validate) return cmd_validate(o);
        if (*bench) return cmd_bench(o);
        if (*gen) return cmd_gen(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
