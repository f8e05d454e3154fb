#include "svardisc/types.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace svardisc {

std::vector<Edge> SummaryGraph::two_cycles() const {
    std::vector<Edge> out;
    for (const auto& [i, j] : edges) {
        if (i < j && edges.count({j, i})) out.emplace_back(i, j);
    }
    return out;
}

void SummaryGraph::validate() const {
    if (d < 0) throw InvalidArgument("SummaryGraph: negative vertex count");
    for (const auto& [i, j] : edges) {
        if (i == j) throw InvalidArgument("SummaryGraph: self edge in cross-edge set");
        if (i < 0 || i >= d || j < 0 || j >= d)
            throw InvalidArgument("SummaryGraph: edge endpoint out of range");
    }
    for (int i : self_loops) {
        if (i < 0 || i >= d) throw InvalidArgument("SummaryGraph: self loop out of range");
    }
}

SummaryGraph summary_graph_with_all_self_loops(int d, std::set<Edge> edges) {
    SummaryGraph g;
    g.d = d;
    g.edges = std::move(edges);
    for (int i = 0; i < d; ++i) g.self_loops.insert(i);
    g.validate();
    return g;
}

void Mag::validate() const {
    for (const auto& [a, b] : directed) {
        if (!vertices.count(a) || !vertices.count(b))
            throw InvalidArgument("Mag: directed edge endpoint not a vertex");
        if (b.t - a.t != k)
            throw InvalidArgument("Mag: directed edge does not span exactly k steps");
        if (has_bidirected(a, b))
            throw InvalidArgument("Mag: pair carries both directed and bidirected edges");
    }
    for (const auto& [a, b] : bidirected) {
        if (!vertices.count(a) || !vertices.count(b))
            throw InvalidArgument("Mag: bidirected edge endpoint not a vertex");
        if (a.t != b.t) throw InvalidArgument("Mag: bidirected edge joins different times");
        if (!(a < b)) throw InvalidArgument("Mag: bidirected edge not stored in canonical order");
    }
}

void PdDag::validate() const {
    for (const auto& [i, j] : solid) {
        if (i == j) throw InvalidArgument("PdDag: self edge");
        if (dashed.count({i, j})) throw InvalidArgument("PdDag: edge both solid and dashed");
        if (i < 0 || i >= d || j < 0 || j >= d) throw InvalidArgument("PdDag: vertex out of range");
    }
    for (const auto& [i, j] : dashed) {
        if (i == j) throw InvalidArgument("PdDag: self edge");
        if (i < 0 || i >= d || j < 0 || j >= d) throw InvalidArgument("PdDag: vertex out of range");
    }
}

namespace {

std::vector<std::vector<int>> union_children(const PdDag& g) {
    std::vector<std::vector<int>> ch(g.d);
    for (const auto& [i, j] : g.solid) ch[i].push_back(j);
    for (const auto& [i, j] : g.dashed) ch[i].push_back(j);
    for (auto& v : ch) std::sort(v.begin(), v.end());
    return ch;
}

// Least number of intermediate vertices on a directed path from -> to over the
// child lists, with `banned` vertices unusable as intermediates; -1 if the
// bound cannot be met.  A walk within the bound implies a simple path within
// the bound, so plain BFS suffices.
int least_intermediates(const std::vector<std::vector<int>>& ch, int from, int to, int bound,
                        const std::vector<bool>& banned, bool forbid_direct) {
    // inter[w]: intermediates on the best known path reaching intermediate w.
    std::vector<int> inter(ch.size(), -1);
    std::deque<int> q;
    for (int w : ch[from]) {
        if (w == to) {
            if (!forbid_direct) return 0;
            continue;
        }
        if (w != from && !banned[w] && inter[w] < 0) {
            inter[w] = 1;
            q.push_back(w);
        }
    }
    int best = -1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        if (inter[v] > bound) continue;
        for (int w : ch[v]) {
            if (w == to) {
                if (best < 0 || inter[v] < best) best = inter[v];
                continue;
            }
            if (w == from || banned[w] || inter[w] >= 0) continue;
            if (inter[v] + 1 <= bound) {
                inter[w] = inter[v] + 1;
                q.push_back(w);
            }
        }
    }
    if (best >= 0 && best <= bound) return best;
    return -1;
}

}  // namespace

bool directed_path_within(const PdDag& g, int a, int b, int max_len, bool exclude_direct) {
    if (a == b) throw InvalidArgument("directed_path_within: endpoints coincide");
    if (max_len < 0) throw InvalidArgument("directed_path_within: negative bound");
    auto ch = union_children(g);
    std::vector<bool> banned(g.d, false);
    return least_intermediates(ch, a, b, max_len, banned, exclude_direct) >= 0;
}

namespace {

// Enumerates simple directed paths u => target with at most max_inter
// intermediates; emit returns true to stop the whole search.
void enumerate_paths(const std::vector<std::vector<int>>& ch, int target, int max_inter,
                     std::vector<int>& path, std::vector<bool>& on_path,
                     const std::function<bool(const std::vector<int>&)>& emit, bool& stop) {
    if (stop) return;
    int v = path.back();
    for (int w : ch[v]) {
        if (stop) return;
        if (w == target) {
            path.push_back(w);
            if (emit(path)) stop = true;
            path.pop_back();
            continue;
        }
        if (on_path[w]) continue;
        if (static_cast<int>(path.size()) > max_inter) continue;  // path holds u + intermediates
        path.push_back(w);
        on_path[w] = true;
        enumerate_paths(ch, target, max_inter, path, on_path, emit, stop);
        on_path[w] = false;
        path.pop_back();
    }
}

}  // namespace

bool confounding_structure_within(const PdDag& g, int a, int b, int max_r, int max_q) {
    if (a == b) throw InvalidArgument("confounding_structure_within: endpoints coincide");
    if (max_r < 0 || max_q < 0) return false;
    auto ch = union_children(g);
    for (int u = 0; u < g.d; ++u) {
        if (u == a || u == b) continue;
        bool found = false;
        bool stop = false;
        std::vector<int> path{u};
        std::vector<bool> on_path(g.d, false);
        on_path[u] = true;
        enumerate_paths(ch, a, max_r, path, on_path,
                        [&](const std::vector<int>& pa) {
                            // Disjointness bans every non-startpoint vertex of
                            // the u=>a path from the u=>b path.
                            std::vector<bool> banned(g.d, false);
                            for (std::size_t idx = 1; idx < pa.size(); ++idx) banned[pa[idx]] = true;
                            if (banned[b]) return false;
                            if (least_intermediates(ch, u, b, max_q, banned, false) >= 0) {
                                found = true;
                                return true;
                            }
                            return false;
                        },
                        stop);
        if (found) return true;
    }
    return false;
}

}  // namespace svardisc
