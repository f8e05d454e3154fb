#include "svardisc/discovery.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "svardisc/rng.hpp"

namespace svardisc {

namespace {

using nlohmann::json;

json vertex_json(TimeVertex v) { return json{{"var", v.var}, {"t", v.t}}; }

void emit(Trace* trace, json rec) {
    if (trace) trace->push_back(std::move(rec));
}

// Next size-len combination of indices into pool; standard lexicographic step.
bool next_combination(std::vector<int>& idx, int pool_size) {
    const int len = static_cast<int>(idx.size());
    for (int i = len - 1; i >= 0; --i) {
        if (idx[i] < pool_size - (len - i)) {
            ++idx[i];
            for (int j = i + 1; j < len; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

struct Candidate {
    TimeVertex a, b;
    bool lagged;
};

}  // namespace

Mag recover_mag(CiBackend& source, int d, int k, const RecoverOptions& opts, Trace* trace) {
    if (d < 1) throw InvalidArgument("recover_mag: d must be >= 1");
    if (k < 2) throw InvalidArgument("recover_mag: k must be >= 2");
    const int late = 1 + k;
    const int max_cond = opts.max_cond.value_or(std::min(d + 2, 2 * d - 2));

    std::vector<TimeVertex> window;
    for (int i = 0; i < d; ++i) window.push_back({i, 1});
    for (int i = 0; i < d; ++i) window.push_back({i, late});
    std::sort(window.begin(), window.end());

    // temporal background knowledge: only these pairs can be adjacent
    std::vector<Candidate> cands;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) cands.push_back({{i, 1}, {j, late}, true});
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) cands.push_back({{i, late}, {j, late}, false});

    std::vector<bool> alive(cands.size(), true);
    for (int level = 0; level <= max_cond; ++level) {
        for (std::size_t c = 0; c < cands.size(); ++c) {
            if (!alive[c]) continue;
            std::vector<TimeVertex> pool;
            for (const auto& v : window)
                if (v != cands[c].a && v != cands[c].b) pool.push_back(v);
            if (level > static_cast<int>(pool.size())) continue;
            std::vector<int> idx(level);
            for (int i = 0; i < level; ++i) idx[i] = i;
            bool more = level <= static_cast<int>(pool.size());
            while (more) {
                std::vector<TimeVertex> z;
                z.reserve(level);
                for (int i : idx) z.push_back(pool[i]);
                CiVerdict v;
                try {
                    v = source.window_ci(cands[c].a, cands[c].b, z);
                } catch (const BackendError& e) {
                    std::ostringstream msg;
                    msg << "recover_mag: backend failed on pair (" << cands[c].a.var << "@"
                        << cands[c].a.t << ", " << cands[c].b.var << "@" << cands[c].b.t
                        << ") level " << level << ": " << e.what();
                    throw BackendError(msg.str());
                }
                emit(trace, json{{"type", "skeleton_ci"},
                                 {"x", vertex_json(cands[c].a)},
                                 {"y", vertex_json(cands[c].b)},
                                 {"z_size", z.size()},
                                 {"independent", v.independent},
                                 {"statistic", v.statistic},
                                 {"threshold_or_pvalue", v.threshold_or_pvalue},
                                 {"method", v.method},
                                 {"seed", source.seed()}});
                if (v.independent) {
                    alive[c] = false;
                    break;
                }
                if (level == 0) break;
                more = next_combination(idx, static_cast<int>(pool.size()));
            }
        }
    }

    Mag mag;
    mag.d = d;
    mag.k = k;
    mag.frame_times = {1, late};
    for (const auto& v : window) mag.vertices.insert(v);
    for (std::size_t c = 0; c < cands.size(); ++c) {
        if (!alive[c]) continue;
        if (cands[c].lagged)
            mag.directed.insert({cands[c].a, cands[c].b});
        else
            mag.bidirected.insert({cands[c].a, cands[c].b});
    }
    mag.validate();
    return mag;
}

PdDag build_pd_dag(const Mag& mag) {
    mag.validate();
    if (mag.frame_times.size() < 2) throw InvalidArgument("build_pd_dag: need two frames");
    const int t0 = mag.frame_times[0];
    const int t1 = mag.frame_times[1];
    PdDag pd;
    pd.d = mag.d;
    for (int i = 0; i < mag.d; ++i) {
        for (int j = 0; j < mag.d; ++j) {
            if (i == j) continue;
            if (mag.has_directed({i, t0}, {j, t1}) && mag.has_bidirected({i, t1}, {j, t1}))
                pd.dashed.insert({i, j});
        }
    }
    return pd;
}

SeparationSets separation_sets(const Mag& mag, int a, int b, int k) {
    if (a == b) throw InvalidArgument("separation_sets: a == b");
    const int t0 = mag.frame_times.at(0);
    const int t1 = t0 + k;
    auto lagged = [&](int i, int j) { return mag.has_directed({i, t0}, {j, t1}); };

    // descendants of b via the lagged directed relation (footnote closure)
    std::set<int> desc;
    std::deque<int> q{b};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int j = 0; j < mag.d; ++j) {
            if (lagged(v, j) && !desc.count(j)) {
                desc.insert(j);
                q.push_back(j);
            }
        }
    }

    SeparationSets out;
    out.m_set.insert(a);
    for (int m = 0; m < mag.d; ++m) {
        if (m == b || m == a) continue;
        if (lagged(a, m) && !desc.count(m)) out.m_set.insert(m);
    }
    for (int s = 0; s < mag.d; ++s) {
        if (s == a) continue;
        bool qualifies = lagged(s, b);
        for (auto it = out.m_set.begin(); !qualifies && it != out.m_set.end(); ++it)
            qualifies = lagged(s, *it);
        if (qualifies) out.s_set.insert(s);
    }
    return out;
}

SummaryGraph resolve(const PdDag& pd_in, const Mag& mag, CiBackend& source,
                     const ResolveOptions& opts, Trace* trace) {
    PdDag pd = pd_in;
    pd.validate();
    const int k_frames = mag.k;

    auto sorted_dashed = [&]() {
        return std::vector<Edge>(pd.dashed.begin(), pd.dashed.end());
    };

    auto rng = make_rng({opts.seed, 0x7265736full});

    while (!pd.dashed.empty()) {
        if (opts.k) {
            const int k = *opts.k;
            bool changed = true;
            while (changed) {
                changed = false;
                for (const auto& e : sorted_dashed()) {
                    const auto [a, b] = e;
                    const bool alt_path = k >= 2 && directed_path_within(pd, a, b, k - 2, true);
                    const bool path_plus_conf =
                        directed_path_within(pd, a, b, k - 1, true) &&
                        confounding_structure_within(pd, a, b, k - 2, k - 2);
                    if (!alt_path && !path_plus_conf) {
                        pd.dashed.erase(e);
                        pd.solid.insert(e);
                        changed = true;
                        emit(trace, nlohmann::json{{"type", "rule"},
                                                   {"rule", "structure_promote"},
                                                   {"edge", {a, b}},
                                                   {"alt_path", alt_path},
                                                   {"path_plus_confounding", path_plus_conf}});
                    }
                }
            }
        }
        if (pd.dashed.empty()) break;

        auto order = sorted_dashed();
        if (opts.pick_order == PickOrder::kSeededShuffle)
            seeded_shuffle(order.begin(), order.end(), rng);
        const auto [a, b] = order.front();

        auto sep = separation_sets(mag, a, b, k_frames);
        CiVerdict v;
        try {
            v = source.edge_ci(a, b, sep.m_set, sep.s_set);
        } catch (const BackendError& e) {
            std::ostringstream msg;
            msg << "resolve: backend failed on dashed edge " << a << " -> " << b << ": "
                << e.what();
            throw BackendError(msg.str());
        }
        nlohmann::json rec{{"type", "edge_ci"},
                           {"edge", {a, b}},
                           {"m_set", std::vector<int>(sep.m_set.begin(), sep.m_set.end())},
                           {"s_set", std::vector<int>(sep.s_set.begin(), sep.s_set.end())},
                           {"independent", v.independent},
                           {"statistic", v.statistic},
                           {"threshold_or_pvalue", v.threshold_or_pvalue},
                           {"method", v.method},
                           {"seed", source.seed()}};
        if (auto* oracle = dynamic_cast<OracleBackend*>(&source))
            rec["proxy_valid"] = oracle->proxy_valid(a, sep.m_set, sep.s_set);
        emit(trace, std::move(rec));

        pd.dashed.erase({a, b});
        if (v.independent) {
            emit(trace, nlohmann::json{{"type", "rule"}, {"rule", "edge_ci_remove"}, {"edge", {a, b}}});
        } else {
            pd.solid.insert({a, b});
            emit(trace, nlohmann::json{{"type", "rule"}, {"rule", "edge_ci_promote"}, {"edge", {a, b}}});
        }
    }

    SummaryGraph out = summary_graph_with_all_self_loops(pd.d, pd.solid);
    if (auto cycles = out.two_cycles(); !cycles.empty()) {
        nlohmann::json cyc = nlohmann::json::array();
        for (const auto& [i, j] : cycles) cyc.push_back({i, j});
        emit(trace, nlohmann::json{{"type", "warning"}, {"warning", "two_cycles"}, {"pairs", cyc}});
    }
    return out;
}

DiscoveryResult discover(CiBackend& source, const DiscoverOptions& opts) {
    DiscoveryResult res;
    RecoverOptions ro;
    ro.max_cond = opts.max_cond;
    res.mag = recover_mag(source, source.var_count(), source.window_k(), ro, &res.trace);
    res.pd0 = build_pd_dag(res.mag);
    ResolveOptions rs;
    rs.k = opts.k;
    rs.seed = opts.seed;
    rs.pick_order = opts.pick_order;
    res.graph = resolve(res.pd0, res.mag, source, rs, &res.trace);
    return res;
}

}  // namespace svardisc
