#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "svardisc/bench.hpp"
#include "svardisc/graph_io.hpp"
#include "svardisc/metrics.hpp"

using namespace svardisc;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// results.csv with the runtime_ms column blanked, for cross-thread comparison
std::string strip_runtime(const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        int commas = 0;
        std::string kept;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == ',') ++commas;
            if (commas == 6) {  // start of runtime_ms
                auto next = line.find(',', i + 1);
                kept = line.substr(0, i) + line.substr(next == std::string::npos ? line.size() : next);
                break;
            }
        }
        out << (kept.empty() ? line : kept) << "\n";
    }
    return out.str();
}

}  // namespace

TEST_CASE("score: exact, half-overlap, and the F1 formula") {
    auto t = summary_graph_with_all_self_loops(3, {{0, 1}, {1, 2}});
    CHECK(score(t, t) == GraphScore{1.0, 1.0, 1.0, 2, 0, 0});

    auto est = summary_graph_with_all_self_loops(3, {{0, 1}, {0, 2}});
    auto s = score(est, t);
    CHECK(s.precision == 0.5);
    CHECK(s.recall == 0.5);
    CHECK(s.f1 == 0.5);

    // precision 0.5, recall 1.0 -> f1 = 2/3
    auto t2 = summary_graph_with_all_self_loops(3, {{0, 1}});
    auto est2 = summary_graph_with_all_self_loops(3, {{0, 1}, {1, 2}});
    auto s2 = score(est2, t2);
    CHECK(s2.precision == 0.5);
    CHECK(s2.recall == 1.0);
    CHECK(s2.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("score: empty graphs and error paths") {
    auto e3 = summary_graph_with_all_self_loops(3, {});
    CHECK(score(e3, e3).f1 == 1.0);
    auto t = summary_graph_with_all_self_loops(3, {{0, 1}});
    CHECK(score(e3, t).f1 == 0.0);
    CHECK(score(t, e3).f1 == 0.0);
    auto e4 = summary_graph_with_all_self_loops(4, {});
    CHECK_THROWS_AS(score(e3, e4), InvalidArgument);
}

TEST_CASE("score: symmetric under joint relabeling") {
    std::mt19937_64 rng(131);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = testing::random_dag_graph(5, 0.4, rng);
        auto e = testing::random_dag_graph(5, 0.4, rng);
        std::vector<int> perm{0, 1, 2, 3, 4};
        for (int i = 5; i > 1; --i) {
            std::uniform_int_distribution<int> pick(0, i - 1);
            std::swap(perm[i - 1], perm[pick(rng)]);
        }
        auto relabel = [&](const SummaryGraph& g) {
            SummaryGraph out;
            out.d = g.d;
            for (const auto& [i, j] : g.edges) out.edges.insert({perm[i], perm[j]});
            for (int i : g.self_loops) out.self_loops.insert(perm[i]);
            return out;
        };
        auto s1 = score(e, t);
        auto s2 = score(relabel(e), relabel(t));
        CHECK(s1 == s2);
    }
}

TEST_CASE("experiment config: parse, canonicalize, validate") {
    const std::string text =
        "# comment\n"
        "d = 5\n"
        "edge_prob = 0.3\n"
        "k = 2,3\n"
        "n = 600, 800\n"
        "seeds = 0..4, 10\n"
        "alpha = 0.05\n"
        "backend = oracle\n"
        "functions = linear,tanh\n"
        "noises = gauss\n";
    auto cfg = parse_experiment_config(text);
    CHECK(cfg.d == 5);
    CHECK(cfg.k == std::vector<int>{2, 3});
    CHECK(cfg.n == std::vector<int>{600, 800});
    CHECK(cfg.seeds == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 10});
    CHECK(cfg.menus.functions == std::vector<FuncTag>{FuncTag::kLinear, FuncTag::kTanh});
    auto again = parse_experiment_config(cfg.canonical_text());
    CHECK(again.canonical_text() == cfg.canonical_text());
    CHECK(again.hash() == cfg.hash());

    auto cfg_sf = parse_experiment_config(text + "self_functions = linear\n");
    CHECK(cfg_sf.menus.self_functions == std::vector<FuncTag>{FuncTag::kLinear});
    CHECK(cfg_sf.hash() != cfg.hash());
    CHECK(parse_experiment_config(cfg_sf.canonical_text()).hash() == cfg_sf.hash());

    CHECK_THROWS_AS(parse_experiment_config("bogus_key = 1\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_experiment_config("d = 5\nk = 1\nn = 10\nseeds = 0\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_experiment_config("d = 5\nk = 2\nn = 10\nseeds = 0,0\n"),
                    InvalidArgument);
}

TEST_CASE("run_grid: single oracle cell produces one exact row") {
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.edge_prob = 0.3;
    cfg.k = {2};
    cfg.n = {1};
    cfg.seeds = {7};
    cfg.backend = ExperimentConfig::Backend::kOracle;
    auto dir = fresh_dir("svardisc_grid_single");
    auto res = run_grid(cfg, dir, 1);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].score.f1 == 1.0);
    CHECK(res.rows[0].error.empty());
    CHECK(fs::exists(dir / "results.csv"));
    CHECK(fs::exists(dir / "summary.csv"));
    CHECK(res.summary_csv.find("# rows_fnv1a=") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("run_grid: oracle grid is all-ones and resume is byte-identical") {
    ExperimentConfig cfg;
    cfg.d = 5;
    cfg.edge_prob = 0.3;
    cfg.k = {2, 3};
    cfg.n = {1};
    cfg.seeds = {0, 1, 2, 3, 4};
    cfg.backend = ExperimentConfig::Backend::kOracle;
    auto dir = fresh_dir("svardisc_grid_resume");
    auto res1 = run_grid(cfg, dir, 2);
    for (const auto& r : res1.rows) CHECK(r.score.f1 == 1.0);
    // resume: cached rows (including runtime) must reproduce the csv exactly
    auto res2 = run_grid(cfg, dir, 4);
    CHECK(res2.results_csv == res1.results_csv);
    CHECK(res2.summary_csv == res1.summary_csv);
    fs::remove_all(dir);
}

TEST_CASE("run_grid: fresh runs under different thread counts agree modulo runtime") {
    ExperimentConfig cfg;
    cfg.d = 4;
    cfg.edge_prob = 0.3;
    cfg.k = {2};
    cfg.n = {1};
    cfg.seeds = {0, 1, 2, 3, 4, 5};
    cfg.backend = ExperimentConfig::Backend::kOracle;
    auto d1 = fresh_dir("svardisc_grid_t1");
    auto d2 = fresh_dir("svardisc_grid_t4");
    auto r1 = run_grid(cfg, d1, 1);
    auto r2 = run_grid(cfg, d2, 4);
    CHECK(strip_runtime(r1.results_csv) == strip_runtime(r2.results_csv));
    CHECK(r1.summary_csv == r2.summary_csv);  // summary carries no timing
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("run_grid: a failing run is recorded, not fatal") {
    ExperimentConfig cfg;
    cfg.d = 3;
    cfg.edge_prob = 0.3;
    cfg.k = {2};
    cfg.n = {1};
    cfg.seeds = {0};
    cfg.backend = ExperimentConfig::Backend::kData;
    cfg.frames = 2;
    // n = 1 replicate -> one pooled row, far below the CI minimum
    auto dir = fresh_dir("svardisc_grid_err");
    auto res = run_grid(cfg, dir, 1);
    REQUIRE(res.rows.size() == 1);
    CHECK_FALSE(res.rows[0].error.empty());
    CHECK(res.summary_csv.find(",1\n") == std::string::npos);  // no crash, errors counted
    fs::remove_all(dir);
}

TEST_CASE("write_grid_plots emits svg files") {
    std::vector<RunRow> rows;
    for (int k : {2, 3, 4}) {
        RunRow r;
        r.k = k;
        r.n = 600;
        r.score.f1 = 1.0 - 0.1 * k;
        rows.push_back(r);
    }
    auto dir = fresh_dir("svardisc_plots");
    write_grid_plots(rows, dir);
    CHECK(fs::exists(dir / "f1_vs_k.svg"));
    CHECK(fs::exists(dir / "f1_vs_n.svg"));
    auto svg = read_text_file(dir / "f1_vs_k.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    fs::remove_all(dir);
}
