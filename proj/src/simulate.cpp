#include "svardisc/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "svardisc/graph_io.hpp"
#include "svardisc/rng.hpp"

namespace svardisc {

void TimeSeriesDataset::validate() const {
    if (values.size() != static_cast<std::size_t>(n) * m * d)
        throw InvalidArgument("TimeSeriesDataset: value buffer size mismatch");
    if (static_cast<int>(names.size()) != d)
        throw InvalidArgument("TimeSeriesDataset: name list size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidArgument("TimeSeriesDataset: non-finite value");
}

SummaryGraph random_summary_graph(int d, double edge_prob, std::uint64_t seed) {
    if (d < 1) throw InvalidArgument("random_summary_graph: d must be >= 1");
    if (edge_prob < 0.0 || edge_prob > 1.0)
        throw InvalidArgument("random_summary_graph: edge_prob outside [0, 1]");
    auto rng = make_rng({seed, 0xe2d6a9ull});
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    seeded_shuffle(order.begin(), order.end(), rng);  // order[i] = topological rank of i
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::set<Edge> edges;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            if (u(rng) < edge_prob) {
                if (order[i] < order[j])
                    edges.insert({i, j});
                else
                    edges.insert({j, i});
            }
        }
    }
    return summary_graph_with_all_self_loops(d, std::move(edges));
}

namespace {

struct CompiledMech {
    // per child: list of (parent, mech)
    std::vector<std::vector<std::pair<int, EdgeMech>>> incoming;
    std::vector<NoiseSpec> noise;
};

CompiledMech compile(const SummaryGraph& g, const MechanismSpec& mech) {
    mech.validate_covers(g, 0.0);  // coverage only; the sampler enforces the w_min bound
    CompiledMech c;
    c.incoming.resize(g.d);
    for (const auto& [e, m] : mech.edge) {
        if (e.first == e.second) {
            if (!g.self_loops.count(e.first)) continue;
        } else if (!g.edges.count(e)) {
            continue;
        }
        c.incoming[e.second].emplace_back(e.first, m);
    }
    c.noise = mech.noise;
    return c;
}

// One full dataset pass; throws SimulationOverflow naming the largest weights.
TimeSeriesDataset simulate_once(const SummaryGraph& g, const MechanismSpec& mech,
                                const SimConfig& cfg, const std::vector<std::string>& names) {
    auto c = compile(g, mech);
    TimeSeriesDataset ds;
    ds.n = cfg.n;
    ds.d = g.d;
    ds.k = cfg.k;
    ds.m = (cfg.T - 1) / cfg.k + 1;
    ds.names = names;
    ds.values.assign(static_cast<std::size_t>(ds.n) * ds.m * ds.d, 0.0);

    auto overflow = [&](int rep, int t) {
        std::ostringstream msg;
        msg << "simulate: series exceeded " << cfg.overflow_threshold << " at replicate " << rep
            << ", step " << t << "; largest weights:";
        std::vector<std::pair<double, Edge>> ws;
        for (const auto& [e, m] : mech.edge) ws.emplace_back(std::abs(m.weight), e);
        std::sort(ws.rbegin(), ws.rend());
        for (std::size_t i = 0; i < ws.size() && i < 3; ++i)
            msg << " (" << ws[i].second.first << "->" << ws[i].second.second << " |w|=" << ws[i].first
                << ")";
        return SimulationOverflow(msg.str());
    };

    std::vector<double> prev(g.d), cur(g.d);
    for (int rep = 0; rep < cfg.n; ++rep) {
        auto rng = make_rng({cfg.seed, 0xda7aull, static_cast<std::uint64_t>(rep)});
        for (int i = 0; i < g.d; ++i) prev[i] = draw_noise(c.noise[i], rng);
        const int total = cfg.burn_in + cfg.T;
        for (int t = 1; t <= total; ++t) {
            for (int i = 0; i < g.d; ++i) {
                double x = 0.0;
                for (const auto& [p, m] : c.incoming[i]) x += apply_mechanism(m, prev[p]);
                x += draw_noise(c.noise[i], rng);
                if (!std::isfinite(x) || std::abs(x) > cfg.overflow_threshold)
                    throw overflow(rep, t);
                cur[i] = x;
            }
            std::swap(prev, cur);
            const int t_post = t - cfg.burn_in;
            if (t_post >= 1 && (t_post - 1) % cfg.k == 0) {
                const int frame = (t_post - 1) / cfg.k;
                if (frame < ds.m)
                    for (int i = 0; i < g.d; ++i) ds.at(rep, frame, i) = prev[i];
            }
        }
    }
    ds.validate();
    return ds;
}

}  // namespace

TimeSeriesDataset simulate(const SummaryGraph& g, const MechanismSpec& mech, const SimConfig& cfg,
                           const std::vector<std::string>& names_in) {
    g.validate();
    if (cfg.k < 2) throw InvalidArgument("simulate: subsampling factor k must be >= 2");
    if (cfg.T < cfg.k + 1) throw InvalidArgument("simulate: T < k+1 leaves fewer than two frames");
    if (cfg.n < 1) throw InvalidArgument("simulate: need at least one replicate");
    if (cfg.burn_in < 0) throw InvalidArgument("simulate: negative burn-in");
    auto names = names_in.empty() ? default_names(g.d) : names_in;
    if (static_cast<int>(names.size()) != g.d)
        throw InvalidArgument("simulate: name list does not match vertex count");

    MechanismSpec working = mech;
    for (int attempt = 0;; ++attempt) {
        try {
            return simulate_once(g, working, cfg, names);
        } catch (const SimulationOverflow&) {
            if (attempt >= cfg.max_retries) throw;
            working.scale_weights(0.5);
        }
    }
}

std::string write_dataset_csv(const TimeSeriesDataset& ds) {
    std::ostringstream out;
    out << "replicate,frame";
    for (const auto& n : ds.names) out << "," << n;
    out << "\n";
    char buf[40];
    for (int rep = 0; rep < ds.n; ++rep) {
        for (int f = 0; f < ds.m; ++f) {
            out << rep << "," << f;
            for (int i = 0; i < ds.d; ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", ds.at(rep, f, i));
                out << "," << buf;
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string write_dataset_meta(const TimeSeriesDataset& ds, const SimConfig& cfg,
                               const MechanismSpec& mech) {
    std::ostringstream out;
    out << "# svardisc dataset metadata v1\n";
    out << "k = " << cfg.k << "\n";
    out << "T = " << cfg.T << "\n";
    out << "n = " << cfg.n << "\n";
    out << "m = " << ds.m << "\n";
    out << "burn_in = " << cfg.burn_in << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << write_mechanism_spec(mech, ds.names);
    return out.str();
}

TimeSeriesDataset read_dataset_dir(const std::filesystem::path& dir) {
    const auto csv = read_text_file(dir / "data.csv");
    const auto meta = read_text_file(dir / "meta.txt");

    TimeSeriesDataset ds;
    {
        std::istringstream ss(meta);
        std::string line;
        while (std::getline(ss, line)) {
            std::istringstream ls(line);
            std::string key, eq;
            ls >> key >> eq;
            if (eq != "=") continue;
            if (key == "k") ls >> ds.k;
        }
    }

    std::istringstream ss(csv);
    std::string line;
    if (!std::getline(ss, line)) throw InvalidArgument("dataset csv: empty file");
    {
        std::istringstream hs(line);
        std::string col;
        int idx = 0;
        while (std::getline(hs, col, ',')) {
            if (idx == 0 && col != "replicate")
                throw InvalidArgument("dataset csv: first column must be 'replicate'");
            if (idx == 1 && col != "frame")
                throw InvalidArgument("dataset csv: second column must be 'frame'");
            if (idx >= 2) ds.names.push_back(col);
            ++idx;
        }
    }
    ds.d = static_cast<int>(ds.names.size());
    if (ds.d == 0) throw InvalidArgument("dataset csv: no variable columns");

    struct Row {
        int rep, frame;
        std::vector<double> x;
    };
    std::vector<Row> rows;
    int max_rep = -1, max_frame = -1;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        Row r;
        if (!std::getline(ls, cell, ',')) break;
        r.rep = std::stoi(cell);
        std::getline(ls, cell, ',');
        r.frame = std::stoi(cell);
        max_rep = std::max(max_rep, r.rep);
        max_frame = std::max(max_frame, r.frame);
        for (int i = 0; i < ds.d; ++i) {
            if (!std::getline(ls, cell, ',')) throw InvalidArgument("dataset csv: short row");
            r.x.push_back(std::stod(cell));
        }
        rows.push_back(std::move(r));
    }
    ds.n = max_rep + 1;
    ds.m = max_frame + 1;
    if (rows.size() != static_cast<std::size_t>(ds.n) * ds.m)
        throw InvalidArgument("dataset csv: incomplete replicate/frame grid");
    ds.values.assign(rows.size() * ds.d, 0.0);
    for (const auto& r : rows)
        for (int i = 0; i < ds.d; ++i) ds.at(r.rep, r.frame, i) = r.x[i];
    ds.validate();
    return ds;
}

}  // namespace svardisc
