// Command-line front end: simulate, discover, oracle-check, bench, score.
// stdout carries machine-readable results only; diagnostics go to stderr.
// Exit codes: 0 success, 1 oracle-check mismatch, 2 bad config/input,
// 3 numeric blow-up after retries, 4 CI backend failure.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <thread>

#include "svardisc/bench.hpp"
#include "svardisc/discovery.hpp"
#include "svardisc/graph_io.hpp"
#include "svardisc/metrics.hpp"
#include "svardisc/rng.hpp"
#include "svardisc/simulate.hpp"

namespace {

using nlohmann::json;
using namespace svardisc;

constexpr const char* kVersion = "svardisc 0.1.0 (graph-format v1, dataset-format v1)";

void echo_config(const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) std::cerr << "# " << k << " = " << v << "\n";
}

json trace_to_jsonl(const Trace& trace, const std::filesystem::path& file) {
    std::string out;
    for (const auto& rec : trace) out += rec.dump() + "\n";
    write_text_file(file, out);
    return json{{"records", trace.size()}, {"file", file.string()}};
}

// Reorders the estimated graph's vertex indices to match the truth's names.
SummaryGraph align_to(const NamedSummaryGraph& est, const std::vector<std::string>& names) {
    std::map<std::string, int> target;
    for (std::size_t i = 0; i < names.size(); ++i) target[names[i]] = static_cast<int>(i);
    if (est.names.size() != names.size())
        throw InvalidArgument("graphs declare different vertex counts");
    std::vector<int> remap(est.names.size());
    for (std::size_t i = 0; i < est.names.size(); ++i) {
        auto it = target.find(est.names[i]);
        if (it == target.end())
            throw InvalidArgument("graphs declare different vertex names: " + est.names[i]);
        remap[i] = it->second;
    }
    SummaryGraph out;
    out.d = est.graph.d;
    for (const auto& [i, j] : est.graph.edges) out.edges.insert({remap[i], remap[j]});
    for (int i : est.graph.self_loops) out.self_loops.insert(remap[i]);
    return out;
}

int cmd_simulate(const std::string& graph_file, const std::vector<std::string>& random_spec,
                 int k, int T, int n, int burn_in, std::uint64_t seed,
                 const std::string& out_dir) {
    NamedSummaryGraph truth;
    if (!graph_file.empty()) {
        truth = read_summary_graph(read_text_file(graph_file));
    } else {
        if (random_spec.size() != 2)
            throw InvalidArgument("--random expects two values: d edge_prob");
        const int d = std::stoi(random_spec[0]);
        const double p = std::stod(random_spec[1]);
        truth.graph = random_summary_graph(d, p, mix_seed({seed, 0x677261ull}));
        truth.names = default_names(d);
    }
    if (T <= 0) T = k + 1;
    SimConfig cfg;
    cfg.n = n;
    cfg.T = T;
    cfg.k = k;
    cfg.burn_in = burn_in;
    cfg.seed = seed;
    echo_config({{"command", "simulate"},
                 {"graph", graph_file.empty() ? "random " + random_spec[0] + " " + random_spec[1]
                                              : graph_file},
                 {"k", std::to_string(k)},
                 {"T", std::to_string(T)},
                 {"n", std::to_string(n)},
                 {"burn_in", std::to_string(burn_in)},
                 {"seed", std::to_string(seed)},
                 {"out", out_dir}});

    MechanismSpec mech = sample_mechanisms(truth.graph, mix_seed({seed, 0x6d656368ull}));
    TimeSeriesDataset ds = simulate(truth.graph, mech, cfg, truth.names);
    const std::filesystem::path dir(out_dir);
    write_text_file(dir / "data.csv", write_dataset_csv(ds));
    write_text_file(dir / "meta.txt", write_dataset_meta(ds, cfg, mech));
    write_text_file(dir / "truth.graph", write_summary_graph(truth.graph, truth.names));
    std::cout << json{{"files", {"data.csv", "meta.txt", "truth.graph"}},
                      {"n", ds.n},
                      {"m", ds.m},
                      {"k", ds.k},
                      {"d", ds.d}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_discover(const std::string& data_dir, const std::string& oracle_file,
                 const std::string& k_flag, int k_true, double alpha, std::uint64_t seed,
                 const std::string& out_dir, int max_cond, bool shuffled_pick) {
    if (data_dir.empty() == oracle_file.empty())
        throw InvalidArgument("exactly one of --data and --oracle is required");

    std::optional<int> k_known;  // k used by the bound-based promotions
    int window_k = 0;            // frame spacing of the observation window
    std::unique_ptr<CiBackend> backend;
    std::vector<std::string> names;

    if (!oracle_file.empty()) {
        auto truth = read_summary_graph(read_text_file(oracle_file));
        names = truth.names;
        if (k_flag == "unknown") {
            if (k_true < 2)
                throw InvalidArgument("--k unknown with --oracle needs --k-true >= 2");
            window_k = k_true;
        } else {
            window_k = std::stoi(k_flag);
            k_known = window_k;
        }
        backend = std::make_unique<OracleBackend>(truth.graph, window_k);
    } else {
        TimeSeriesDataset ds = read_dataset_dir(data_dir);
        names = ds.names;
        window_k = ds.k;
        if (k_flag.empty()) {
            k_known = ds.k;  // default: the recorded subsampling factor
        } else if (k_flag != "unknown") {
            k_known = std::stoi(k_flag);
            if (*k_known != ds.k)
                throw InvalidArgument("--k disagrees with the dataset metadata (k=" +
                                      std::to_string(ds.k) + ")");
        }
        backend = std::make_unique<DataBackend>(ds, alpha, seed);
    }

    echo_config({{"command", "discover"},
                 {"source", oracle_file.empty() ? "data:" + data_dir : "oracle:" + oracle_file},
                 {"k", k_known ? std::to_string(*k_known) : "unknown"},
                 {"alpha", std::to_string(alpha)},
                 {"seed", std::to_string(seed)},
                 {"out", out_dir}});

    DiscoverOptions opts;
    opts.k = k_known;
    opts.seed = seed;
    opts.pick_order = shuffled_pick ? PickOrder::kSeededShuffle : PickOrder::kAscending;
    if (max_cond >= 0) opts.max_cond = max_cond;
    DiscoveryResult res = discover(*backend, opts);

    const std::filesystem::path dir(out_dir);
    write_text_file(dir / "summary.graph", write_summary_graph(res.graph, names));
    write_text_file(dir / "mag.graph", write_mag(res.mag, names));
    auto trace_info = trace_to_jsonl(res.trace, dir / "trace.jsonl");

    json edges = json::array();
    for (const auto& [i, j] : res.graph.edges) edges.push_back({names[i], names[j]});
    json cycles = json::array();
    for (const auto& [i, j] : res.graph.two_cycles()) cycles.push_back({names[i], names[j]});
    if (!cycles.empty())
        std::cerr << "# warning: recovered graph contains mutual-causation pairs\n";
    std::cout << json{{"edges", edges}, {"two_cycles", cycles}, {"trace", trace_info}}.dump()
              << "\n";
    return 0;
}

int cmd_oracle_check(const std::string& graph_file, int k, std::uint64_t seed) {
    auto truth = read_summary_graph(read_text_file(graph_file));
    echo_config({{"command", "oracle-check"},
                 {"graph", graph_file},
                 {"k", std::to_string(k)},
                 {"seed", std::to_string(seed)}});
    OracleBackend backend(truth.graph, k);
    DiscoverOptions opts;
    opts.k = k;
    opts.seed = seed;
    auto res = discover(backend, opts);
    auto sc = score(res.graph, truth.graph);
    const bool exact = res.graph == truth.graph;
    json out = to_json(sc);
    out["exact"] = exact;
    std::cout << out.dump() << "\n";
    return exact ? 0 : 1;
}

int cmd_bench(const std::string& config_file, const std::string& out_dir, int threads,
              bool plots) {
    auto cfg = parse_experiment_config(read_text_file(config_file));
    echo_config({{"command", "bench"},
                 {"config", config_file},
                 {"out", out_dir},
                 {"threads", std::to_string(threads)},
                 {"cfg_hash", cfg.hash()}});
    std::cerr << cfg.canonical_text();
    auto res = run_grid(cfg, out_dir, threads);
    if (plots) write_grid_plots(res.rows, out_dir);
    int errors = 0;
    for (const auto& r : res.rows)
        if (!r.error.empty()) ++errors;
    std::cout << json{{"rows", res.rows.size()},
                      {"errors", errors},
                      {"results", (std::filesystem::path(out_dir) / "results.csv").string()},
                      {"summary", (std::filesystem::path(out_dir) / "summary.csv").string()}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_score(const std::string& est_file, const std::string& truth_file) {
    auto est = read_summary_graph(read_text_file(est_file));
    auto truth = read_summary_graph(read_text_file(truth_file));
    echo_config({{"command", "score"}, {"est", est_file}, {"truth", truth_file}});
    auto aligned = align_to(est, truth.names);
    std::cout << to_json(score(aligned, truth.graph)).dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"summary-graph discovery from subsampled time series"};
    app.set_version_flag("--version", kVersion);
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    app.add_option("--threads", threads, "parallelism cap (default: available cores)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a subsampled SVAR dataset");
    std::string sim_graph, sim_out;
    std::vector<std::string> sim_random;
    int sim_k = 2, sim_T = 0, sim_n = 1000, sim_burn = 100;
    std::uint64_t sim_seed = 0;
    sim->add_option("--graph", sim_graph, "ground-truth summary graph file");
    sim->add_option("--random", sim_random, "random ER graph: d edge_prob")->expected(2);
    sim->add_option("--k", sim_k, "subsampling factor (>= 2)")->required();
    sim->add_option("--T", sim_T, "post burn-in steps (default k+1)");
    sim->add_option("--n", sim_n, "replicates");
    sim->add_option("--burn-in", sim_burn, "burn-in steps");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out", sim_out, "output directory")->required();

    // discover
    auto* dis = app.add_subcommand("discover", "recover the summary graph");
    std::string dis_data, dis_oracle, dis_k, dis_out = ".";
    int dis_ktrue = 0, dis_maxcond = -1;
    double dis_alpha = 0.05;
    std::uint64_t dis_seed = 0;
    bool dis_shuffle = false;
    dis->add_option("--data", dis_data, "dataset directory (data.csv + meta.txt)");
    dis->add_option("--oracle", dis_oracle, "ground-truth graph file for the graphical oracle");
    dis->add_option("--k", dis_k, "subsampling factor, or 'unknown' to skip the bound-based promotions");
    dis->add_option("--k-true", dis_ktrue, "true k for the oracle when --k unknown");
    dis->add_option("--alpha", dis_alpha, "significance level");
    dis->add_option("--seed", dis_seed, "RNG seed");
    dis->add_option("--out", dis_out, "output directory");
    dis->add_option("--max-cond", dis_maxcond, "max conditioning set size");
    dis->add_flag("--shuffled-pick", dis_shuffle, "seeded-shuffle dashed-edge pick order");

    // oracle-check
    auto* chk = app.add_subcommand("oracle-check", "verify oracle-mode recovery of a graph");
    std::string chk_graph;
    int chk_k = 2;
    std::uint64_t chk_seed = 0;
    chk->add_option("--graph", chk_graph, "summary graph file")->required();
    chk->add_option("--k", chk_k, "subsampling factor")->required();
    chk->add_option("--seed", chk_seed, "RNG seed");

    // bench
    auto* ben = app.add_subcommand("bench", "run the experiment grid");
    std::string ben_cfg, ben_out;
    bool ben_plots = false;
    ben->add_option("--config", ben_cfg, "experiment config file")->required();
    ben->add_option("--out", ben_out, "output directory")->required();
    ben->add_flag("--plots", ben_plots, "emit F1 SVG plots");

    // score
    auto* sco = app.add_subcommand("score", "score an estimated graph against the truth");
    std::string sco_est, sco_truth;
    sco->add_option("--est", sco_est, "estimated graph file")->required();
    sco->add_option("--truth", sco_truth, "ground-truth graph file")->required();

    app.require_subcommand(1);
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(sim_graph, sim_random, sim_k, sim_T, sim_n, sim_burn, sim_seed,
                                sim_out);
        if (dis->parsed())
            return cmd_discover(dis_data, dis_oracle, dis_k, dis_ktrue, dis_alpha, dis_seed,
                                dis_out, dis_maxcond, dis_shuffle);
        if (chk->parsed()) return cmd_oracle_check(chk_graph, chk_k, chk_seed);
        if (ben->parsed()) return cmd_bench(ben_cfg, ben_out, threads, ben_plots);
        if (sco->parsed()) return cmd_score(sco_est, sco_truth);
    } catch (const SimulationOverflow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const BackendError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
