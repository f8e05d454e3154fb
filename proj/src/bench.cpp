#include "svardisc/bench.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "svardisc/discovery.hpp"
#include "svardisc/graph_io.hpp"
#include "svardisc/rng.hpp"
#include "svardisc/simulate.hpp"

namespace svardisc {

namespace {

constexpr std::uint64_t kGraphSalt = 0x677261ull;
constexpr std::uint64_t kMechSalt = 0x6d656368ull;
constexpr std::uint64_t kDataSalt = 0x64617461ull;
constexpr std::uint64_t kDiscSalt = 0x64697363ull;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

template <typename T>
std::string join(const std::vector<T>& xs, const std::string& sep = ",") {
    std::ostringstream out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << sep;
        out << xs[i];
    }
    return out.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::uint64_t grid_graph_seed(std::uint64_t seed) { return mix_seed({seed, kGraphSalt}); }
std::uint64_t grid_mech_seed(std::uint64_t seed) { return mix_seed({seed, kMechSalt}); }
std::uint64_t grid_data_seed(std::uint64_t seed) { return mix_seed({seed, kDataSalt}); }
std::uint64_t grid_discover_seed(std::uint64_t seed) { return mix_seed({seed, kDiscSalt}); }

void ExperimentConfig::validate() const {
    if (d < 1) throw InvalidArgument("config: d must be >= 1");
    if (edge_prob < 0 || edge_prob > 1) throw InvalidArgument("config: edge_prob outside [0,1]");
    if (k.empty() || n.empty() || seeds.empty())
        throw InvalidArgument("config: k, n, and seeds lists must be nonempty");
    for (int kk : k)
        if (kk < 2) throw InvalidArgument("config: every k must be >= 2");
    for (int nn : n)
        if (nn < 1) throw InvalidArgument("config: every n must be >= 1");
    std::set<std::uint64_t> uniq(seeds.begin(), seeds.end());
    if (uniq.size() != seeds.size()) throw InvalidArgument("config: seeds must be distinct");
    if (alpha <= 0 || alpha >= 1) throw InvalidArgument("config: alpha outside (0,1)");
    if (frames < 2) throw InvalidArgument("config: frames must be >= 2");
    if (menus.functions.empty() || menus.noises.empty())
        throw InvalidArgument("config: mechanism menus must be nonempty");
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream out;
    out << "d = " << d << "\n";
    out << "edge_prob = " << fmt_double(edge_prob) << "\n";
    out << "k = " << join(k) << "\n";
    out << "n = " << join(n) << "\n";
    out << "seeds = " << join(seeds) << "\n";
    out << "alpha = " << fmt_double(alpha) << "\n";
    out << "backend = " << (backend == Backend::kOracle ? "oracle" : "data") << "\n";
    std::vector<std::string> fns, nzs, sfs;
    for (auto f : menus.functions) fns.push_back(to_string(f));
    for (auto z : menus.noises) nzs.push_back(to_string(z));
    for (auto f : menus.self_functions) sfs.push_back(to_string(f));
    out << "functions = " << join(fns) << "\n";
    out << "noises = " << join(nzs) << "\n";
    if (!sfs.empty()) out << "self_functions = " << join(sfs) << "\n";
    out << "frames = " << frames << "\n";
    out << "burn_in = " << burn_in << "\n";
    return out.str();
}

std::string ExperimentConfig::hash() const { return hex64(fnv1a(canonical_text())); }

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.k.clear();
    cfg.n.clear();
    std::istringstream ss(text);
    std::string line;
    auto parse_seed_list = [](const std::string& val) {
        std::vector<std::uint64_t> out;
        for (const auto& tok : split(val, ',')) {
            auto dots = tok.find("..");
            if (dots != std::string::npos) {
                auto lo = std::stoull(tok.substr(0, dots));
                auto hi = std::stoull(tok.substr(dots + 2));
                if (hi < lo) throw InvalidArgument("config: bad seed range " + tok);
                for (auto s = lo; s <= hi; ++s) out.push_back(s);
            } else {
                out.push_back(std::stoull(tok));
            }
        }
        return out;
    };
    while (std::getline(ss, line)) {
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        key = trim(key);
        val = trim(val);
        try {
            if (key == "d") cfg.d = std::stoi(val);
            else if (key == "edge_prob") cfg.edge_prob = std::stod(val);
            else if (key == "k") {
                for (const auto& t : split(val, ',')) cfg.k.push_back(std::stoi(t));
            } else if (key == "n") {
                for (const auto& t : split(val, ',')) cfg.n.push_back(std::stoi(t));
            } else if (key == "seeds") cfg.seeds = parse_seed_list(val);
            else if (key == "alpha") cfg.alpha = std::stod(val);
            else if (key == "backend") {
                if (val == "oracle") cfg.backend = ExperimentConfig::Backend::kOracle;
                else if (val == "data") cfg.backend = ExperimentConfig::Backend::kData;
                else throw InvalidArgument("config: backend must be oracle or data");
            } else if (key == "functions") {
                cfg.menus.functions.clear();
                for (const auto& t : split(val, ',')) cfg.menus.functions.push_back(func_tag_from_string(t));
            } else if (key == "noises") {
                cfg.menus.noises.clear();
                for (const auto& t : split(val, ',')) cfg.menus.noises.push_back(noise_tag_from_string(t));
            } else if (key == "self_functions") {
                cfg.menus.self_functions.clear();
                for (const auto& t : split(val, ','))
                    cfg.menus.self_functions.push_back(func_tag_from_string(t));
            } else if (key == "frames") cfg.frames = std::stoi(val);
            else if (key == "burn_in") cfg.burn_in = std::stoi(val);
            else throw InvalidArgument("config: unknown key '" + key + "'");
        } catch (const InvalidArgument&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidArgument("config: bad value for key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

namespace {

RunRow execute_run(const ExperimentConfig& cfg, int k, int n, std::uint64_t seed) {
    RunRow row;
    row.k = k;
    row.n = n;
    row.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        SummaryGraph truth = random_summary_graph(cfg.d, cfg.edge_prob, grid_graph_seed(seed));
        DiscoverOptions dopts;
        dopts.k = k;
        dopts.seed = grid_discover_seed(seed);
        if (cfg.backend == ExperimentConfig::Backend::kOracle) {
            OracleBackend backend(truth, k);
            row.score = score(discover(backend, dopts).graph, truth);
        } else {
            MechanismSpec mech = sample_mechanisms(truth, grid_mech_seed(seed), cfg.menus);
            SimConfig sim;
            sim.n = n;
            sim.k = k;
            sim.T = (cfg.frames - 1) * k + 1;
            sim.burn_in = cfg.burn_in;
            sim.seed = grid_data_seed(seed);
            TimeSeriesDataset ds = simulate(truth, mech, sim);
            DataBackend backend(ds, cfg.alpha, grid_discover_seed(seed));
            row.score = score(discover(backend, dopts).graph, truth);
        }
    } catch (const Error& e) {
        std::string msg = e.what();
        for (auto& c : msg)
            if (c == ',' || c == '\n') c = ';';
        row.error = msg;
    }
    const auto t1 = std::chrono::steady_clock::now();
    row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return row;
}

std::string row_key(int k, int n, std::uint64_t seed) {
    std::ostringstream out;
    out << "run_k" << k << "_n" << n << "_s" << seed << ".json";
    return out.str();
}

nlohmann::json row_to_json(const RunRow& r) {
    return nlohmann::json{{"k", r.k},
                          {"n", r.n},
                          {"seed", r.seed},
                          {"score", to_json(r.score)},
                          {"runtime_ms", r.runtime_ms},
                          {"error", r.error}};
}

bool row_from_json(const nlohmann::json& j, RunRow& r) {
    try {
        r.k = j.at("k").get<int>();
        r.n = j.at("n").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        const auto& s = j.at("score");
        r.score.precision = s.at("precision").get<double>();
        r.score.recall = s.at("recall").get<double>();
        r.score.f1 = s.at("f1").get<double>();
        r.score.tp = s.at("tp").get<long>();
        r.score.fp = s.at("fp").get<long>();
        r.score.fn = s.at("fn").get<long>();
        r.runtime_ms = j.at("runtime_ms").get<long>();
        r.error = j.at("error").get<std::string>();
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

std::string build_results_csv(const std::vector<RunRow>& rows) {
    std::ostringstream out;
    out << "k,n,seed,precision,recall,f1,runtime_ms,error\n";
    for (const auto& r : rows) {
        out << r.k << "," << r.n << "," << r.seed << "," << fmt_double(r.score.precision) << ","
            << fmt_double(r.score.recall) << "," << fmt_double(r.score.f1) << "," << r.runtime_ms
            << "," << r.error << "\n";
    }
    return out.str();
}

// Checksum input: the seed-derived row fields (runtime is measured, not derived).
std::string rows_digest_blob(const std::vector<RunRow>& rows) {
    std::ostringstream out;
    for (const auto& r : rows)
        out << r.k << "," << r.n << "," << r.seed << "," << fmt_double(r.score.precision) << ","
            << fmt_double(r.score.recall) << "," << fmt_double(r.score.f1) << "," << r.error
            << "\n";
    return out.str();
}

std::string build_summary_csv(const std::vector<RunRow>& rows) {
    struct Cell {
        std::vector<double> p, r, f;
        int errors = 0;
    };
    std::map<std::pair<int, int>, Cell> cells;
    for (const auto& row : rows) {
        auto& c = cells[{row.k, row.n}];
        if (!row.error.empty()) {
            ++c.errors;
            continue;
        }
        c.p.push_back(row.score.precision);
        c.r.push_back(row.score.recall);
        c.f.push_back(row.score.f1);
    }
    auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return 0.0;
        double s = 0;
        for (double x : v) s += x;
        return s / v.size();
    };
    auto stdev = [&](const std::vector<double>& v) {
        if (v.size() < 2) return 0.0;
        const double m = mean(v);
        double s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / (v.size() - 1));
    };
    std::ostringstream out;
    out << "k,n,runs,errors,precision_mean,precision_std,recall_mean,recall_std,f1_mean,f1_std\n";
    for (const auto& [key, c] : cells) {
        out << key.first << "," << key.second << "," << (c.f.size() + c.errors) << "," << c.errors
            << "," << fmt_double(mean(c.p)) << "," << fmt_double(stdev(c.p)) << ","
            << fmt_double(mean(c.r)) << "," << fmt_double(stdev(c.r)) << ","
            << fmt_double(mean(c.f)) << "," << fmt_double(stdev(c.f)) << "\n";
    }
    out << "# rows_fnv1a=" << hex64(fnv1a(rows_digest_blob(rows))) << "\n";
    return out.str();
}

}  // namespace

GridResult run_grid(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                    int threads) {
    cfg.validate();
    const auto runs_dir = out_dir / "runs" / cfg.hash();
    std::filesystem::create_directories(runs_dir);

    struct Task {
        int k, n;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int k : cfg.k)
        for (int n : cfg.n)
            for (auto seed : cfg.seeds) tasks.push_back({k, n, seed});

    std::vector<RunRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto& t = tasks[i];
            const auto cache_file = runs_dir / row_key(t.k, t.n, t.seed);
            if (std::filesystem::exists(cache_file)) {
                RunRow cached;
                std::ifstream in(cache_file);
                nlohmann::json j;
                try {
                    in >> j;
                } catch (const std::exception&) {
                    j = nullptr;
                }
                if (!j.is_null() && row_from_json(j, cached)) {
                    rows[i] = cached;
                    continue;
                }
            }
            rows[i] = execute_run(cfg, t.k, t.n, t.seed);
            std::ofstream out(cache_file);
            out << row_to_json(rows[i]).dump(2) << "\n";
        }
    };
    const int nthreads = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    GridResult res;
    res.rows = std::move(rows);
    res.results_csv = build_results_csv(res.rows);
    res.summary_csv = build_summary_csv(res.rows);
    write_text_file(out_dir / "results.csv", res.results_csv);
    write_text_file(out_dir / "summary.csv", res.summary_csv);
    return res;
}

namespace {

std::string svg_line_plot(const std::string& title, const std::vector<double>& xs,
                          const std::vector<double>& ys) {
    const int W = 480, H = 320, ml = 50, mr = 20, mt = 30, mb = 40;
    double xmin = xs.front(), xmax = xs.back();
    if (xmax == xmin) xmax = xmin + 1;
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='18' text-anchor='middle' font-size='14'>" << title
        << "</text>\n";
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - y * (H - mt - mb); };
    out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
        << "' stroke='black'/>\n";
    for (double g = 0.0; g <= 1.0001; g += 0.25) {
        out << "<text x='" << ml - 8 << "' y='" << py(g) + 4
            << "' text-anchor='end' font-size='10'>" << g << "</text>\n";
    }
    out << "<polyline fill='none' stroke='steelblue' stroke-width='2' points='";
    for (std::size_t i = 0; i < xs.size(); ++i) out << px(xs[i]) << "," << py(ys[i]) << " ";
    out << "'/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << "<circle cx='" << px(xs[i]) << "' cy='" << py(ys[i])
            << "' r='3' fill='steelblue'/>\n";
        out << "<text x='" << px(xs[i]) << "' y='" << H - mb + 16
            << "' text-anchor='middle' font-size='10'>" << xs[i] << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

void write_grid_plots(const std::vector<RunRow>& rows, const std::filesystem::path& out_dir) {
    std::map<int, std::pair<double, int>> by_k, by_n;
    for (const auto& r : rows) {
        if (!r.error.empty()) continue;
        by_k[r.k].first += r.score.f1;
        by_k[r.k].second += 1;
        by_n[r.n].first += r.score.f1;
        by_n[r.n].second += 1;
    }
    auto emit = [&](const std::map<int, std::pair<double, int>>& m, const std::string& title,
                    const std::filesystem::path& file) {
        if (m.empty()) return;
        std::vector<double> xs, ys;
        for (const auto& [x, acc] : m) {
            xs.push_back(x);
            ys.push_back(acc.second ? acc.first / acc.second : 0.0);
        }
        write_text_file(file, svg_line_plot(title, xs, ys));
    };
    emit(by_k, "mean F1 vs k", out_dir / "f1_vs_k.svg");
    emit(by_n, "mean F1 vs n", out_dir / "f1_vs_n.svg");
}

}  // namespace svardisc
