#include "svardisc/graph_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace svardisc {

std::vector<std::string> default_names(int d) {
    std::vector<std::string> out;
    out.reserve(d);
    for (int i = 0; i < d; ++i) out.push_back("X" + std::to_string(i));
    return out;
}

namespace {

const char* kHeader = "# svardisc graph v1\n";

std::vector<std::string> resolve_names(int d, const std::vector<std::string>& names) {
    if (names.empty()) return default_names(d);
    if (static_cast<int>(names.size()) != d)
        throw InvalidArgument("graph io: name list does not match vertex count");
    return names;
}

struct ParsedLine {
    enum Kind { kVertex, kDirected, kBidirected, kDashed } kind;
    std::string lhs, rhs;
};

// Splits a non-comment line into (lhs, arrow, rhs) or a bare vertex token.
ParsedLine parse_line(const std::string& line, int lineno) {
    std::istringstream ss(line);
    std::string a, arrow, b, extra;
    ss >> a >> arrow >> b;
    if (ss >> extra)
        throw InvalidArgument("graph io: trailing tokens on line " + std::to_string(lineno));
    if (arrow.empty()) return {ParsedLine::kVertex, a, ""};
    if (b.empty()) throw InvalidArgument("graph io: missing right vertex on line " + std::to_string(lineno));
    if (arrow == "-->") return {ParsedLine::kDashed, a, b};
    if (arrow == "->") return {ParsedLine::kDirected, a, b};
    if (arrow == "<->") return {ParsedLine::kBidirected, a, b};
    throw InvalidArgument("graph io: unknown edge token '" + arrow + "' on line " +
                          std::to_string(lineno));
}

std::vector<ParsedLine> parse_lines(const std::string& text) {
    std::vector<ParsedLine> out;
    std::istringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        out.push_back(parse_line(line.substr(start), lineno));
    }
    return out;
}

class NameTable {
public:
    int id(const std::string& name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(names_.size());
        index_[name] = id;
        names_.push_back(name);
        return id;
    }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::map<std::string, int> index_;
    std::vector<std::string> names_;
};

TimeVertex parse_time_vertex(const std::string& token, NameTable& table) {
    auto at = token.rfind('@');
    if (at == std::string::npos || at + 1 >= token.size())
        throw InvalidArgument("graph io: expected name@t token, got '" + token + "'");
    int t = 0;
    try {
        std::size_t used = 0;
        t = std::stoi(token.substr(at + 1), &used);
        if (used != token.size() - at - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw InvalidArgument("graph io: bad time index in token '" + token + "'");
    }
    return {table.id(token.substr(0, at)), t};
}

}  // namespace

std::string write_summary_graph(const SummaryGraph& g, const std::vector<std::string>& names_in) {
    g.validate();
    auto names = resolve_names(g.d, names_in);
    std::ostringstream out;
    out << kHeader;
    for (int i = 0; i < g.d; ++i) out << names[i] << "\n";
    for (int i : g.self_loops) out << names[i] << " -> " << names[i] << "\n";
    for (const auto& [i, j] : g.edges) out << names[i] << " -> " << names[j] << "\n";
    return out.str();
}

NamedSummaryGraph read_summary_graph(const std::string& text) {
    NameTable table;
    SummaryGraph g;
    for (const auto& pl : parse_lines(text)) {
        switch (pl.kind) {
            case ParsedLine::kVertex:
                table.id(pl.lhs);
                break;
            case ParsedLine::kDirected: {
                int a = table.id(pl.lhs), b = table.id(pl.rhs);
                if (a == b)
                    g.self_loops.insert(a);
                else
                    g.edges.insert({a, b});
                break;
            }
            default:
                throw InvalidArgument("graph io: summary graphs carry only '->' edges");
        }
    }
    g.d = static_cast<int>(table.names().size());
    g.validate();
    return {std::move(g), table.names()};
}

std::string write_pd_dag(const PdDag& g, const std::vector<std::string>& names_in) {
    g.validate();
    auto names = resolve_names(g.d, names_in);
    std::ostringstream out;
    out << kHeader;
    for (int i = 0; i < g.d; ++i) out << names[i] << "\n";
    for (const auto& [i, j] : g.solid) out << names[i] << " -> " << names[j] << "\n";
    for (const auto& [i, j] : g.dashed) out << names[i] << " --> " << names[j] << "\n";
    return out.str();
}

NamedPdDag read_pd_dag(const std::string& text) {
    NameTable table;
    PdDag g;
    for (const auto& pl : parse_lines(text)) {
        switch (pl.kind) {
            case ParsedLine::kVertex:
                table.id(pl.lhs);
                break;
            case ParsedLine::kDirected:
                g.solid.insert({table.id(pl.lhs), table.id(pl.rhs)});
                break;
            case ParsedLine::kDashed:
                g.dashed.insert({table.id(pl.lhs), table.id(pl.rhs)});
                break;
            default:
                throw InvalidArgument("graph io: PD-DAG files carry '->' and '-->' edges");
        }
    }
    g.d = static_cast<int>(table.names().size());
    g.validate();
    return {std::move(g), table.names()};
}

std::string write_mag(const Mag& g, const std::vector<std::string>& names_in) {
    g.validate();
    auto names = resolve_names(g.d, names_in);
    auto token = [&](TimeVertex v) { return names[v.var] + "@" + std::to_string(v.t); };
    std::ostringstream out;
    out << kHeader;
    for (const auto& v : g.vertices) out << token(v) << "\n";
    for (const auto& [a, b] : g.directed) out << token(a) << " -> " << token(b) << "\n";
    for (const auto& [a, b] : g.bidirected) out << token(a) << " <-> " << token(b) << "\n";
    return out.str();
}

NamedMag read_mag(const std::string& text) {
    NameTable table;
    Mag g;
    for (const auto& pl : parse_lines(text)) {
        switch (pl.kind) {
            case ParsedLine::kVertex:
                g.vertices.insert(parse_time_vertex(pl.lhs, table));
                break;
            case ParsedLine::kDirected: {
                auto a = parse_time_vertex(pl.lhs, table), b = parse_time_vertex(pl.rhs, table);
                g.vertices.insert(a);
                g.vertices.insert(b);
                g.directed.insert({a, b});
                break;
            }
            case ParsedLine::kBidirected: {
                auto a = parse_time_vertex(pl.lhs, table), b = parse_time_vertex(pl.rhs, table);
                g.vertices.insert(a);
                g.vertices.insert(b);
                if (b < a) std::swap(a, b);
                g.bidirected.insert({a, b});
                break;
            }
            default:
                throw InvalidArgument("graph io: MAG files carry '->' and '<->' edges");
        }
    }
    g.d = static_cast<int>(table.names().size());
    std::set<int> times;
    for (const auto& v : g.vertices) times.insert(v.t);
    g.frame_times.assign(times.begin(), times.end());
    if (g.frame_times.size() < 2)
        throw InvalidArgument("graph io: MAG file needs at least two observed frames");
    g.k = g.frame_times[1] - g.frame_times[0];
    for (std::size_t i = 1; i < g.frame_times.size(); ++i) {
        if (g.frame_times[i] - g.frame_times[i - 1] != g.k)
            throw InvalidArgument("graph io: MAG frames not evenly spaced");
    }
    g.validate();
    return {std::move(g), table.names()};
}

std::string read_text_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& p, const std::string& content) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write file: " + p.string());
    out << content;
}

}  // namespace svardisc
