#pragma once

#include <compare>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "svardisc/errors.hpp"

namespace svardisc {

// One vertex of a time-unrolled graph: variable index at a time step.
// Ordered by (t, var) so iteration over vertex sets is deterministic.
struct TimeVertex {
    int var = 0;
    int t = 0;

    friend auto operator<=>(const TimeVertex& a, const TimeVertex& b) {
        if (auto c = a.t <=> b.t; c != 0) return c;
        return a.var <=> b.var;
    }
    friend bool operator==(const TimeVertex&, const TimeVertex&) = default;
};

using Edge = std::pair<int, int>;  // summary-level directed edge i -> j

// Directed graph over series variables.  Self causation is tracked separately
// from cross edges; cross edges may form cycles (mutual causation is
// representable and reported, never silently dropped).
struct SummaryGraph {
    int d = 0;
    std::set<Edge> edges;       // i -> j with i != j
    std::set<int> self_loops;   // i with X_i in PA_i

    bool has_edge(int i, int j) const { return edges.count({i, j}) > 0; }

    // Pairs {i,j} with both i->j and j->i present.
    std::vector<Edge> two_cycles() const;

    void validate() const;

    friend bool operator==(const SummaryGraph&, const SummaryGraph&) = default;
};

SummaryGraph summary_graph_with_all_self_loops(int d, std::set<Edge> edges);

// Mixed graph over observed time-indexed vertices: directed lagged edges and
// bidirected instantaneous edges.
struct Mag {
    int d = 0;
    int k = 0;                        // lag spanned by every directed edge
    std::vector<int> frame_times;     // observed frames, ascending
    std::set<TimeVertex> vertices;
    std::set<std::pair<TimeVertex, TimeVertex>> directed;    // a -> b
    std::set<std::pair<TimeVertex, TimeVertex>> bidirected;  // stored with first < second

    bool has_directed(TimeVertex a, TimeVertex b) const { return directed.count({a, b}) > 0; }
    bool has_bidirected(TimeVertex a, TimeVertex b) const {
        if (b < a) std::swap(a, b);
        return bidirected.count({a, b}) > 0;
    }

    // Directed edges must span exactly k steps, bidirected edges must join
    // same-time vertices, and no pair may carry both edge kinds.
    void validate() const;

    friend bool operator==(const Mag&, const Mag&) = default;
};

// Partially determined DAG: solid edges are decided causal relations, dashed
// ones are still open.  Both kinds act as the parent relation for path and
// confounding-structure queries.
struct PdDag {
    int d = 0;
    std::set<Edge> solid;
    std::set<Edge> dashed;

    bool has_any_edge(int i, int j) const {
        return solid.count({i, j}) > 0 || dashed.count({i, j}) > 0;
    }

    void validate() const;

    friend bool operator==(const PdDag&, const PdDag&) = default;
};

// True iff a directed path a => b over solid+dashed edges exists with at most
// max_len intermediate vertices.  A path of length 0 is the single edge a->b;
// with exclude_direct that edge does not count as a path (it can still appear
// inside longer paths, which cannot happen on simple paths anyway).
bool directed_path_within(const PdDag& g, int a, int b, int max_len, bool exclude_direct);

// True iff some vertex u outside {a,b} has directed paths u=>a and u=>b of
// lengths <= max_r and <= max_q sharing no vertex except u.
bool confounding_structure_within(const PdDag& g, int a, int b, int max_r, int max_q);

}  // namespace svardisc
