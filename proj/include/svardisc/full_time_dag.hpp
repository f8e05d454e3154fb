#pragma once

#include <set>
#include <vector>

#include "svardisc/types.hpp"

namespace svardisc {

// Time-unrolled first-order graph over d x T vertices.  The edge pattern is
// time-invariant: (i, t-1) -> (j, t) exists for every valid t iff i is a
// step-parent of j.  Vertices at t in {1, k+1, ..., floor(T/k)*k+1} are
// observed, everything else is latent.
class FullTimeDag {
public:
    FullTimeDag(int d, int T, int k, std::vector<std::vector<int>> step_parents);

    int d() const { return d_; }
    int T() const { return T_; }
    int k() const { return k_; }

    bool contains(TimeVertex v) const {
        return v.var >= 0 && v.var < d_ && v.t >= 1 && v.t <= T_;
    }
    bool is_observed(TimeVertex v) const { return contains(v) && (v.t - 1) % k_ == 0; }
    std::vector<int> observed_frames() const;
    std::vector<TimeVertex> observed_vertices() const;

    bool has_edge(TimeVertex u, TimeVertex v) const;
    bool adjacent(TimeVertex u, TimeVertex v) const { return has_edge(u, v) || has_edge(v, u); }
    const std::vector<int>& step_parents(int var) const { return step_parents_[var]; }
    const std::vector<int>& step_children(int var) const { return step_children_[var]; }
    std::size_t edge_count() const;

private:
    int d_, T_, k_;
    std::vector<std::vector<int>> step_parents_;   // step_parents_[j]: i with (i,t-1)->(j,t)
    std::vector<std::vector<int>> step_children_;  // inverse relation
};

FullTimeDag unroll(const SummaryGraph& g, int T, int k);

// Reflexive-transitive closure of the parent relation (v is in the result).
std::set<TimeVertex> ancestors(const FullTimeDag& g, TimeVertex v);
std::set<TimeVertex> descendants(const FullTimeDag& g, TimeVertex v);

// Standard d-separation via reachability over active trails; a collider is
// open iff it or one of its descendants is in z.  Inputs must be pairwise
// disjoint vertex sets inside the graph.
bool d_separated(const FullTimeDag& g,
                 const std::set<TimeVertex>& a,
                 const std::set<TimeVertex>& b,
                 const std::set<TimeVertex>& z);

// True iff every non-endpoint of the path lies in latent or is a collider on
// the path, and every collider is an ancestor of one of the endpoints.
// Consecutive path vertices must be adjacent; endpoints must not be latent.
bool is_inducing_path(const FullTimeDag& g,
                      const std::vector<TimeVertex>& path,
                      const std::set<TimeVertex>& latent);

// For an inducing path (relative to the unobserved vertices) whose endpoints
// are mutually non-ancestral: walks the path's confounder/collider alternation
// and returns the confounder preceding the first collider ancestral to the
// far endpoint, else the last confounder.
TimeVertex find_latent_confounder(const FullTimeDag& g, const std::vector<TimeVertex>& path);

// MAG over the observed vertices: adjacency iff an inducing path relative to
// the unobserved set exists, orientation by ancestry.
Mag mag_from_full_time_dag(const FullTimeDag& g);

// Inducing-path existence between two observed vertices, searched as
// reachability over (vertex, arrival-orientation) states.
bool inducing_path_exists(const FullTimeDag& g, TimeVertex a, TimeVertex b);

}  // namespace svardisc
