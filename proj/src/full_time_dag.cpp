#include "svardisc/full_time_dag.hpp"

#include <algorithm>
#include <deque>

namespace svardisc {

FullTimeDag::FullTimeDag(int d, int T, int k, std::vector<std::vector<int>> step_parents)
    : d_(d), T_(T), k_(k), step_parents_(std::move(step_parents)), step_children_(d) {
    if (d < 1) throw InvalidArgument("FullTimeDag: need at least one variable");
    if (k < 2) throw InvalidArgument("FullTimeDag: subsampling factor k must be >= 2");
    if (T < k + 1)
        throw InvalidArgument("FullTimeDag: T < k+1 leaves fewer than two observed frames");
    if (static_cast<int>(step_parents_.size()) != d)
        throw InvalidArgument("FullTimeDag: step-parent table size mismatch");
    for (int j = 0; j < d; ++j) {
        for (int i : step_parents_[j]) {
            if (i < 0 || i >= d) throw InvalidArgument("FullTimeDag: parent index out of range");
            step_children_[i].push_back(j);
        }
    }
    for (auto& v : step_parents_) std::sort(v.begin(), v.end());
    for (auto& v : step_children_) std::sort(v.begin(), v.end());
}

std::vector<int> FullTimeDag::observed_frames() const {
    std::vector<int> out;
    for (int t = 1; t <= T_; t += k_) out.push_back(t);
    return out;
}

std::vector<TimeVertex> FullTimeDag::observed_vertices() const {
    std::vector<TimeVertex> out;
    for (int t : observed_frames())
        for (int i = 0; i < d_; ++i) out.push_back({i, t});
    return out;
}

bool FullTimeDag::has_edge(TimeVertex u, TimeVertex v) const {
    if (!contains(u) || !contains(v)) return false;
    if (v.t != u.t + 1) return false;
    const auto& pa = step_parents_[v.var];
    return std::binary_search(pa.begin(), pa.end(), u.var);
}

std::size_t FullTimeDag::edge_count() const {
    std::size_t per_step = 0;
    for (const auto& pa : step_parents_) per_step += pa.size();
    return per_step * static_cast<std::size_t>(T_ - 1);
}

FullTimeDag unroll(const SummaryGraph& g, int T, int k) {
    g.validate();
    if (k < 2) throw InvalidArgument("unroll: subsampling factor k must be >= 2");
    if (T < k + 1) throw InvalidArgument("unroll: T must be at least k+1 for two observed frames");
    std::vector<std::vector<int>> pa(g.d);
    for (const auto& [i, j] : g.edges) pa[j].push_back(i);
    for (int i : g.self_loops) pa[i].push_back(i);
    return FullTimeDag(g.d, T, k, std::move(pa));
}

namespace {

inline int vid(const FullTimeDag& g, TimeVertex v) { return (v.t - 1) * g.d() + v.var; }

void require_vertex(const FullTimeDag& g, TimeVertex v, const char* who) {
    if (!g.contains(v)) throw InvalidArgument(std::string(who) + ": vertex outside the graph");
}

std::vector<char> ancestor_flags(const FullTimeDag& g, TimeVertex v) {
    std::vector<char> flag(static_cast<std::size_t>(g.d()) * g.T(), 0);
    std::deque<TimeVertex> q{v};
    flag[vid(g, v)] = 1;
    while (!q.empty()) {
        TimeVertex x = q.front();
        q.pop_front();
        if (x.t <= 1) continue;
        for (int i : g.step_parents(x.var)) {
            TimeVertex p{i, x.t - 1};
            if (!flag[vid(g, p)]) {
                flag[vid(g, p)] = 1;
                q.push_back(p);
            }
        }
    }
    return flag;
}

}  // namespace

std::set<TimeVertex> ancestors(const FullTimeDag& g, TimeVertex v) {
    require_vertex(g, v, "ancestors");
    auto flag = ancestor_flags(g, v);
    std::set<TimeVertex> out;
    for (int t = 1; t <= g.T(); ++t)
        for (int i = 0; i < g.d(); ++i)
            if (flag[(t - 1) * g.d() + i]) out.insert({i, t});
    return out;
}

std::set<TimeVertex> descendants(const FullTimeDag& g, TimeVertex v) {
    require_vertex(g, v, "descendants");
    std::set<TimeVertex> out{v};
    std::deque<TimeVertex> q{v};
    while (!q.empty()) {
        TimeVertex x = q.front();
        q.pop_front();
        if (x.t >= g.T()) continue;
        for (int j : g.step_children(x.var)) {
            TimeVertex c{j, x.t + 1};
            if (out.insert(c).second) q.push_back(c);
        }
    }
    return out;
}

bool d_separated(const FullTimeDag& g,
                 const std::set<TimeVertex>& a,
                 const std::set<TimeVertex>& b,
                 const std::set<TimeVertex>& z) {
    auto check_disjoint = [](const std::set<TimeVertex>& s, const std::set<TimeVertex>& t) {
        for (const auto& v : s)
            if (t.count(v)) return false;
        return true;
    };
    if (!check_disjoint(a, b) || !check_disjoint(a, z) || !check_disjoint(b, z))
        throw InvalidArgument("d_separated: query sets must be pairwise disjoint");
    for (const auto& v : a) require_vertex(g, v, "d_separated");
    for (const auto& v : b) require_vertex(g, v, "d_separated");
    for (const auto& v : z) require_vertex(g, v, "d_separated");

    const int n = g.d() * g.T();
    std::vector<char> in_z(n, 0), in_b(n, 0), an_z(n, 0);
    for (const auto& v : z) in_z[vid(g, v)] = 1;
    for (const auto& v : b) in_b[vid(g, v)] = 1;
    {
        std::deque<TimeVertex> q(z.begin(), z.end());
        for (const auto& v : z) an_z[vid(g, v)] = 1;
        while (!q.empty()) {
            TimeVertex x = q.front();
            q.pop_front();
            if (x.t <= 1) continue;
            for (int i : g.step_parents(x.var)) {
                TimeVertex p{i, x.t - 1};
                if (!an_z[vid(g, p)]) {
                    an_z[vid(g, p)] = 1;
                    q.push_back(p);
                }
            }
        }
    }

    // Reachability over active trails; state is (vertex, arrived-from-child?).
    // Arriving "up" (from a child or as a source) allows both directions when
    // the vertex is unconditioned; arriving "down" (from a parent) continues
    // to children when unconditioned and bounces to parents only at colliders
    // whose descendants meet z.
    std::vector<char> seen_up(n, 0), seen_down(n, 0);
    std::deque<std::pair<TimeVertex, bool>> q;  // bool up
    for (const auto& v : a) {
        q.emplace_back(v, true);
        seen_up[vid(g, v)] = 1;
    }
    while (!q.empty()) {
        auto [v, up] = q.front();
        q.pop_front();
        if (in_b[vid(g, v)]) return false;
        auto push = [&](TimeVertex w, bool dir_up) {
            auto& seen = dir_up ? seen_up : seen_down;
            if (!seen[vid(g, w)]) {
                seen[vid(g, w)] = 1;
                q.emplace_back(w, dir_up);
            }
        };
        if (up) {
            if (!in_z[vid(g, v)]) {
                if (v.t > 1)
                    for (int i : g.step_parents(v.var)) push({i, v.t - 1}, true);
                if (v.t < g.T())
                    for (int j : g.step_children(v.var)) push({j, v.t + 1}, false);
            }
        } else {
            if (!in_z[vid(g, v)]) {
                if (v.t < g.T())
                    for (int j : g.step_children(v.var)) push({j, v.t + 1}, false);
            }
            if (an_z[vid(g, v)]) {
                if (v.t > 1)
                    for (int i : g.step_parents(v.var)) push({i, v.t - 1}, true);
            }
        }
    }
    return true;
}

bool is_inducing_path(const FullTimeDag& g,
                      const std::vector<TimeVertex>& path,
                      const std::set<TimeVertex>& latent) {
    if (path.size() < 2) throw InvalidArgument("is_inducing_path: need at least two vertices");
    for (const auto& v : path) require_vertex(g, v, "is_inducing_path");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!g.adjacent(path[i], path[i + 1]))
            throw InvalidArgument("is_inducing_path: consecutive vertices not adjacent");
    }
    std::set<TimeVertex> distinct(path.begin(), path.end());
    if (distinct.size() != path.size())
        throw InvalidArgument("is_inducing_path: path vertices must be distinct");
    if (latent.count(path.front()) || latent.count(path.back()))
        throw InvalidArgument("is_inducing_path: endpoints must be observed");

    auto an_a = ancestor_flags(g, path.front());
    auto an_b = ancestor_flags(g, path.back());
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const TimeVertex v = path[i];
        const bool in_from_prev = path[i - 1].t == v.t - 1;
        const bool in_from_next = path[i + 1].t == v.t - 1;
        const bool collider = in_from_prev && in_from_next;
        if (collider) {
            if (!an_a[vid(g, v)] && !an_b[vid(g, v)]) return false;
        } else if (!latent.count(v)) {
            return false;
        }
    }
    return true;
}

TimeVertex find_latent_confounder(const FullTimeDag& g, const std::vector<TimeVertex>& path) {
    std::set<TimeVertex> latent;
    for (int t = 1; t <= g.T(); ++t)
        for (int i = 0; i < g.d(); ++i)
            if (!g.is_observed({i, t})) latent.insert({i, t});
    if (!is_inducing_path(g, path, latent))
        throw InvalidArgument("find_latent_confounder: not an inducing path");
    const TimeVertex a = path.front(), b = path.back();
    auto an_a = ancestor_flags(g, a);
    auto an_b = ancestor_flags(g, b);
    if (an_b[vid(g, a)] || an_a[vid(g, b)])
        throw InvalidArgument("find_latent_confounder: endpoints must be mutually non-ancestral");

    // Non-ancestral endpoints force the canonical shape
    //   a <-..- U_1 ->..-> C_1 <-..- U_2 ... U_r ->..-> b
    // with confounders at local time minima and colliders at local maxima.
    std::vector<TimeVertex> confounders, colliders;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const TimeVertex v = path[i];
        const bool in_from_prev = path[i - 1].t == v.t - 1;
        const bool in_from_next = path[i + 1].t == v.t - 1;
        if (in_from_prev && in_from_next) colliders.push_back(v);
        if (!in_from_prev && !in_from_next) confounders.push_back(v);
    }
    if (confounders.empty() || colliders.size() + 1 != confounders.size())
        throw InvalidArgument("find_latent_confounder: path lacks the confounder alternation");
    for (std::size_t i = 0; i < colliders.size(); ++i) {
        if (an_b[vid(g, colliders[i])]) return confounders[i];
    }
    return confounders.back();
}

bool inducing_path_exists(const FullTimeDag& g, TimeVertex a, TimeVertex b) {
    require_vertex(g, a, "inducing_path_exists");
    require_vertex(g, b, "inducing_path_exists");
    if (a == b) return false;
    auto an_a = ancestor_flags(g, a);
    auto an_b = ancestor_flags(g, b);
    const int n = g.d() * g.T();

    // State (v, arrived-into-v?).  Leaving towards a child needs v latent
    // (mediator or fork); leaving towards a parent needs v collider-ancestral
    // when entered head-on, else v latent.
    std::vector<char> seen_in(n, 0), seen_out(n, 0);
    std::deque<std::pair<TimeVertex, bool>> q;
    auto push = [&](TimeVertex w, bool into) -> bool {
        if (w == b) return true;
        auto& seen = into ? seen_in : seen_out;
        if (!seen[vid(g, w)]) {
            seen[vid(g, w)] = 1;
            q.emplace_back(w, into);
        }
        return false;
    };
    if (a.t < g.T())
        for (int j : g.step_children(a.var))
            if (push({j, a.t + 1}, true)) return true;
    if (a.t > 1)
        for (int i : g.step_parents(a.var))
            if (push({i, a.t - 1}, false)) return true;
    while (!q.empty()) {
        auto [v, into] = q.front();
        q.pop_front();
        const bool latent = !g.is_observed(v);
        if (latent && v.t < g.T()) {
            for (int j : g.step_children(v.var))
                if (push({j, v.t + 1}, true)) return true;
        }
        const bool can_turn_down = into ? (an_a[vid(g, v)] || an_b[vid(g, v)]) : latent;
        if (can_turn_down && v.t > 1) {
            for (int i : g.step_parents(v.var))
                if (push({i, v.t - 1}, false)) return true;
        }
    }
    return false;
}

Mag mag_from_full_time_dag(const FullTimeDag& g) {
    Mag mag;
    mag.d = g.d();
    mag.k = g.k();
    mag.frame_times = g.observed_frames();
    if (mag.frame_times.size() < 2)
        throw InvalidArgument("mag_from_full_time_dag: need at least two observed frames");
    auto obs = g.observed_vertices();
    std::sort(obs.begin(), obs.end());
    mag.vertices.insert(obs.begin(), obs.end());

    std::vector<std::vector<char>> an(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) an[i] = ancestor_flags(g, obs[i]);

    for (std::size_t i = 0; i < obs.size(); ++i) {
        for (std::size_t j = i + 1; j < obs.size(); ++j) {
            if (!inducing_path_exists(g, obs[i], obs[j])) continue;
            if (an[j][vid(g, obs[i])]) {
                mag.directed.insert({obs[i], obs[j]});
            } else if (an[i][vid(g, obs[j])]) {
                mag.directed.insert({obs[j], obs[i]});
            } else {
                mag.bidirected.insert({obs[i], obs[j]});
            }
        }
    }
    mag.validate();  // Prop-3.1 shape holds by construction; treat as a self-check
    return mag;
}

}  // namespace svardisc
