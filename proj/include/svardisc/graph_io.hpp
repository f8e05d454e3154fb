#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "svardisc/types.hpp"

namespace svardisc {

// Text format, one item per line:
//   name            vertex declaration (summary / PD-DAG files)
//   name@t          vertex declaration (time-indexed files)
//   A -> B          directed edge (a summary self loop is written A -> A)
//   A <-> B         bidirected edge
//   A --> B         dashed edge
// Lines starting with '#' are comments.  Writers emit a canonical form
// (vertices first, then sorted edges) that round-trips bit-exactly.

std::vector<std::string> default_names(int d);

struct NamedSummaryGraph {
    SummaryGraph graph;
    std::vector<std::string> names;
};

std::string write_summary_graph(const SummaryGraph& g, const std::vector<std::string>& names = {});
NamedSummaryGraph read_summary_graph(const std::string& text);

struct NamedPdDag {
    PdDag graph;
    std::vector<std::string> names;
};

std::string write_pd_dag(const PdDag& g, const std::vector<std::string>& names = {});
NamedPdDag read_pd_dag(const std::string& text);

struct NamedMag {
    Mag graph;
    std::vector<std::string> names;
};

std::string write_mag(const Mag& g, const std::vector<std::string>& names = {});
NamedMag read_mag(const std::string& text);

std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& content);

}  // namespace svardisc
