#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "svardisc/mechanism.hpp"
#include "svardisc/metrics.hpp"

namespace svardisc {

struct ExperimentConfig {
    int d = 5;
    double edge_prob = 0.3;
    std::vector<int> k;
    std::vector<int> n;
    std::vector<std::uint64_t> seeds;
    double alpha = 0.05;
    enum class Backend { kOracle, kData } backend = Backend::kOracle;
    MechanismMenus menus;
    int frames = 2;     // observed frames per replicate; n stays the pooled row count
    int burn_in = 100;

    void validate() const;
    std::string canonical_text() const;
    std::string hash() const;  // content hash of the canonical text
};

ExperimentConfig parse_experiment_config(const std::string& text);

struct RunRow {
    int k = 0;
    int n = 0;
    std::uint64_t seed = 0;
    GraphScore score;
    long runtime_ms = 0;
    std::string error;  // empty on success
};

struct GridResult {
    std::vector<RunRow> rows;
    std::string results_csv;
    std::string summary_csv;
};

// Executes the (k, n, seed) grid with per-run derived seeds.  Finished runs
// are cached under out_dir/runs/<cfg-hash>/ and reused on resume, which also
// pins their recorded runtime.  results.csv and summary.csv are written into
// out_dir; summary.csv carries a checksum of the result rows.
GridResult run_grid(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                    int threads = 1);

// Static SVG plots of mean F1 against k and against n.
void write_grid_plots(const std::vector<RunRow>& rows, const std::filesystem::path& out_dir);

// Derivation of the per-run seeds (exposed for tests):
std::uint64_t grid_graph_seed(std::uint64_t seed);
std::uint64_t grid_mech_seed(std::uint64_t seed);
std::uint64_t grid_data_seed(std::uint64_t seed);
std::uint64_t grid_discover_seed(std::uint64_t seed);

}  // namespace svardisc
