#include "scope/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace scope {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
    : InvalidInput(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

struct Token {
    std::string text;
    std::size_t column;
};

// Whitespace-separated tokens up to a '#' comment; columns are 1-based.
std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

class Reader {
public:
    Reader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    bool next(std::vector<Token>& tokens) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            tokens = tokenize(line);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw ParseError(source_, line_no_, t.column, msg);
    }
    [[noreturn]] void fail_line(const std::string& msg) const { throw ParseError(source_, line_no_, 1, msg); }

    std::uint64_t integer(const Token& t, const char* what) const {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            fail(t, std::string("expected ") + what + ", got '" + t.text + "'");
        return v;
    }

    double number(const Token& t, const char* what, bool allow_inf) const {
        return number(t.text, t, what, allow_inf);
    }

    double number(const std::string& text, const Token& t, const char* what, bool allow_inf) const {
        if (text == "inf") {
            if (!allow_inf) fail(t, std::string(what) + " must be finite");
            return kInf;
        }
        double v = 0;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size() || !std::isfinite(v))
            fail(t, std::string("expected ") + what + ", got '" + text + "'");
        return v;
    }

    VertexId vertex(const Token& t, std::size_t n) const {
        const auto v = integer(t, "vertex id");
        if (v >= n) fail(t, "vertex " + t.text + " not declared (V " + std::to_string(n) + ")");
        return static_cast<VertexId>(v);
    }

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_no_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_no_ = 0;
};

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open " + path);
    return f;
}

}  // namespace

std::string format_number(double x) {
    if (x == kInf) return "inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

bool NetworkFile::has_coords() const {
    return !coords.empty() && std::all_of(coords.begin(), coords.end(), [](const auto& c) { return c.has_value(); });
}

NetworkFile read_network(std::istream& in, const std::string& source) {
    Reader r(in, source);
    std::vector<Token> tk;
    std::optional<std::size_t> n;
    std::vector<double> nu;
    std::vector<std::string> labels;
    std::vector<EdgeSpec> specs;
    std::vector<Level> levels;
    std::vector<std::string> categories;
    std::vector<std::optional<LonLat>> coords;

    auto level_of = [&](const Token& t) -> Level {
        auto it = std::find(labels.begin(), labels.end(), t.text);
        if (it != labels.end()) return static_cast<Level>(it - labels.begin());
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size() || v >= labels.size())
            r.fail(t, "unknown level '" + t.text + "'");
        return static_cast<Level>(v);
    };

    while (r.next(tk)) {
        const std::string& kind = tk[0].text;
        if (kind == "V") {
            if (n) r.fail(tk[0], "duplicate V record");
            if (tk.size() != 2) r.fail_line("expected: V <vertex count>");
            n = r.integer(tk[1], "vertex count");
            coords.assign(*n, std::nullopt);
        } else if (kind == "L") {
            if (!labels.empty()) r.fail(tk[0], "duplicate L record");
            if (tk.size() < 2) r.fail_line("expected: L <label>:<nu> ...");
            if (tk.size() - 1 > 16) r.fail(tk[17], "at most 16 levels are supported");
            for (std::size_t i = 1; i < tk.size(); ++i) {
                const std::string& text = tk[i].text;
                const auto colon = text.rfind(':');
                std::string label = colon == std::string::npos ? std::to_string(i - 1) : text.substr(0, colon);
                std::string value = colon == std::string::npos ? text : text.substr(colon + 1);
                if (label.empty()) r.fail(tk[i], "empty level label");
                if (std::find(labels.begin(), labels.end(), label) != labels.end())
                    r.fail(tk[i], "duplicate level label '" + label + "'");
                const double v = r.number(value, tk[i], "scope value", true);
                if (v < 0) r.fail(tk[i], "scope value must be non-negative");
                if (!nu.empty() && !(v > nu.back())) r.fail(tk[i], "scope values must be strictly increasing");
                labels.push_back(std::move(label));
                nu.push_back(v);
            }
            if (nu.back() != kInf) r.fail(tk.back(), "last scope value must be inf");
            if (nu.size() < 2) r.fail(tk.back(), "at least two levels are required");
        } else if (kind == "E") {
            if (!n || labels.empty()) r.fail(tk[0], "E record before V and L");
            if (tk.size() != 5 && tk.size() != 6) r.fail_line("expected: E <tail> <head> <weight> <level> [category]");
            EdgeSpec e;
            e.tail = r.vertex(tk[1], *n);
            e.head = r.vertex(tk[2], *n);
            e.weight = r.number(tk[3], "weight", false);
            if (!(e.weight > 0)) r.fail(tk[3], "weight must be positive");
            specs.push_back(e);
            levels.push_back(level_of(tk[4]));
            categories.push_back(tk.size() == 6 ? tk[5].text : std::string());
        } else if (kind == "C") {
            if (!n) r.fail(tk[0], "C record before V");
            if (tk.size() != 4) r.fail_line("expected: C <vertex> <lon> <lat>");
            const VertexId v = r.vertex(tk[1], *n);
            coords[v] = LonLat{r.number(tk[2], "longitude", false), r.number(tk[3], "latitude", false)};
        } else {
            r.fail(tk[0], "unknown record '" + kind + "'");
        }
    }
    if (!n) throw ParseError(source, r.line(), 1, "missing V record");
    if (labels.empty()) throw ParseError(source, r.line(), 1, "missing L record");
    NetworkFile f;
    f.network = RoadNetwork(*n, specs);
    f.scope = ScopeMapping(levels, nu, labels);
    f.categories = std::move(categories);
    f.coords = std::move(coords);
    validate_scope_mapping(f.scope, f.network);
    return f;
}

NetworkFile load_network(const std::string& path) {
    auto f = open_in(path);
    return read_network(f, path);
}

void write_network(std::ostream& out, const NetworkFile& file) {
    const auto& g = file.network;
    const auto& sc = file.scope;
    std::vector<std::string> labels = sc.labels();
    if (labels.size() != sc.level_count()) {
        labels.clear();
        for (std::size_t l = 0; l < sc.level_count(); ++l) labels.push_back(std::to_string(l));
    }
    out << "V " << g.vertex_count() << "\nL";
    for (std::size_t l = 0; l < sc.level_count(); ++l) out << ' ' << labels[l] << ':' << format_number(sc.nu(Level(l)));
    out << '\n';
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const Edge& ed = g.edge(e);
        out << "E " << ed.tail << ' ' << ed.head << ' ' << format_number(ed.weight) << ' ' << labels[sc.level(e)];
        if (e < file.categories.size() && !file.categories[e].empty()) out << ' ' << file.categories[e];
        out << '\n';
    }
    for (VertexId v = 0; v < file.coords.size(); ++v) {
        if (!file.coords[v]) continue;
        out << "C " << v << ' ' << format_number((*file.coords[v])[0]) << ' ' << format_number((*file.coords[v])[1])
            << '\n';
    }
}

void save_network(const std::string& path, const NetworkFile& file) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write " + path);
    write_network(f, file);
}

RoadNetwork read_closures(std::istream& in, const RoadNetwork& network, const std::string& source) {
    Reader r(in, source);
    std::vector<Token> tk;
    std::vector<double> ws(network.edge_count());
    for (EdgeId e = 0; e < network.edge_count(); ++e) ws[e] = network.weight(e, Weighting::Updated);
    while (r.next(tk)) {
        if (tk.size() > 2) r.fail(tk[2], "expected: <edge> [w*]");
        const Token& id = tk[0];
        EdgeId e = kNoEdge;
        if (id.text.find(',') == std::string::npos) {
            const auto v = r.integer(id, "edge id");
            if (v >= network.edge_count()) r.fail(id, "edge " + id.text + " does not exist");
            e = static_cast<EdgeId>(v);
        } else {
            std::vector<std::string> parts;
            std::stringstream ss(id.text);
            for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
            if (parts.size() != 2 && parts.size() != 3) r.fail(id, "expected <tail>,<head>[,<ordinal>]");
            std::vector<std::uint64_t> nums;
            for (const auto& p : parts) nums.push_back(r.integer(Token{p, id.column}, "vertex id"));
            if (nums[0] >= network.vertex_count() || nums[1] >= network.vertex_count())
                r.fail(id, "vertex not declared");
            const std::uint64_t ordinal = parts.size() == 3 ? nums[2] : 0;
            std::uint64_t seen = 0;
            for (EdgeId f : network.out_edges(VertexId(nums[0]))) {
                if (network.edge(f).head != nums[1]) continue;
                if (seen++ == ordinal) {
                    e = f;
                    break;
                }
            }
            if (e == kNoEdge) r.fail(id, "no edge " + id.text);
        }
        const double w = tk.size() == 2 ? r.number(tk[1], "updated weight", true) : kInf;
        if (w < network.weight(e)) r.fail(tk.size() == 2 ? tk[1] : id, "updated weight below base weight");
        ws[e] = w;
    }
    return network.with_updated_weights(ws);
}

RoadNetwork load_closures(const std::string& path, const RoadNetwork& network) {
    auto f = open_in(path);
    return read_closures(f, network, path);
}

void write_closures(std::ostream& out, const RoadNetwork& network) {
    for (EdgeId e = 0; e < network.edge_count(); ++e) {
        const double w = network.weight(e, Weighting::Updated);
        if (w == network.weight(e)) continue;
        out << e;
        if (w != kInf) out << ' ' << format_number(w);
        out << '\n';
    }
}

Walk read_walk(std::istream& in, const RoadNetwork& network, const std::string& source) {
    Reader r(in, source);
    std::vector<Token> tk;
    Walk w;
    bool first = true;
    while (r.next(tk)) {
        for (const Token& t : tk) {
            if (first) {
                w.start = r.vertex(t, network.vertex_count());
                first = false;
                continue;
            }
            const auto e = r.integer(t, "edge id");
            if (e >= network.edge_count()) r.fail(t, "edge " + t.text + " does not exist");
            if (network.edge(EdgeId(e)).tail != walk_end(network, w)) r.fail(t, "edge " + t.text + " does not continue the walk");
            w.edges.push_back(EdgeId(e));
        }
    }
    if (first) throw ParseError(source, r.line(), 1, "empty walk file");
    return w;
}

Walk load_walk(const std::string& path, const RoadNetwork& network) {
    auto f = open_in(path);
    return read_walk(f, network, path);
}

void write_walk(std::ostream& out, const Walk& walk) {
    out << walk.start;
    for (EdgeId e : walk.edges) out << ' ' << e;
    out << '\n';
}

CategoryTable default_osm_table(std::size_t level_count) {
    if (level_count < 2) throw InvalidInput("at least two levels are required");
    const std::size_t top = level_count - 1;
    auto at = [&](std::size_t rank) { return static_cast<Level>((rank * top + 2) / 4); };
    CategoryTable t;
    for (const char* c : {"motorway", "motorway_link", "trunk", "trunk_link"}) t[c] = Level(top);
    for (const char* c : {"primary", "primary_link"}) t[c] = at(3);
    for (const char* c : {"secondary", "secondary_link"}) t[c] = at(2);
    for (const char* c : {"tertiary", "tertiary_link"}) t[c] = at(1);
    for (const char* c : {"unclassified", "residential", "living_street", "service", "road", "track"}) t[c] = 0;
    return t;
}

ScopeMapping assign_scope_from_categories(const std::vector<std::string>& categories, const CategoryTable& table,
                                          std::vector<double> nu, std::vector<std::string> labels) {
    std::set<std::string> missing;
    std::vector<Level> levels;
    levels.reserve(categories.size());
    for (const auto& c : categories) {
        auto it = table.find(c);
        if (it == table.end()) {
            missing.insert(c.empty() ? "<untagged>" : c);
            levels.push_back(0);
        } else {
            levels.push_back(it->second);
        }
    }
    if (!missing.empty()) {
        std::string msg = "unmapped road categories:";
        for (const auto& c : missing) msg += " " + c;
        throw InvalidInput(msg);
    }
    for (Level l : levels)
        if (l >= nu.size()) throw InvalidInput("category table uses level " + std::to_string(l) + " beyond nu");
    return ScopeMapping(std::move(levels), std::move(nu), std::move(labels));
}

RouteFormat export_route(std::ostream& out, const Walk& walk, const RoadNetwork& network, const ScopeMapping& scope,
                         const std::vector<std::optional<LonLat>>& coords, const std::vector<bool>& permit_edges,
                         RouteFormat format) {
    check_walk(network, walk);
    auto permit = [&](std::size_t i) { return i < permit_edges.size() && permit_edges[i]; };
    const auto vs = walk_vertices(network, walk);
    if (format == RouteFormat::GeoJson) {
        const bool located = std::all_of(vs.begin(), vs.end(), [&](VertexId v) { return v < coords.size() && coords[v]; });
        if (!located) {
            std::cerr << "warning: vertices without coordinates, writing csv instead of geojson\n";
            format = RouteFormat::Csv;
        }
    }
    if (format == RouteFormat::Csv) {
        out << "edge_id,tail,head,weight,level,permit\n";
        for (std::size_t i = 0; i < walk.size(); ++i) {
            const EdgeId e = walk.edges[i];
            const Edge& ed = network.edge(e);
            out << e << ',' << ed.tail << ',' << ed.head << ',' << format_number(ed.updated_weight) << ','
                << int(scope.level(e)) << ',' << (permit(i) ? 1 : 0) << '\n';
        }
        return format;
    }
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < walk.size(); ++i) {
        const EdgeId e = walk.edges[i];
        const Edge& ed = network.edge(e);
        const LonLat& a = *coords[ed.tail];
        const LonLat& b = *coords[ed.head];
        nlohmann::ordered_json f;
        f["type"] = "Feature";
        f["geometry"] = {{"type", "LineString"}, {"coordinates", {{a[0], a[1]}, {b[0], b[1]}}}};
        f["properties"] = {{"edge_id", e}, {"tail", ed.tail}, {"head", ed.head}, {"weight", ed.updated_weight},
                           {"level", int(scope.level(e))}, {"permit", permit(i)}};
        features.push_back(std::move(f));
    }
    nlohmann::ordered_json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    out << doc.dump(2) << '\n';
    return format;
}

}  // namespace scope
