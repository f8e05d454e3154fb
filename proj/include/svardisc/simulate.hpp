#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "svardisc/mechanism.hpp"
#include "svardisc/types.hpp"

namespace svardisc {

// n independent replicates of the subsampled observation matrix: frame f of
// replicate r holds X(t) at t = 1 + f*k (post burn-in indexing).
struct TimeSeriesDataset {
    int n = 0;  // replicates
    int m = 0;  // observed frames per replicate
    int d = 0;  // variables
    int k = 2;  // subsampling factor
    std::vector<std::string> names;
    std::vector<double> values;  // [rep][frame][var], row-major

    double at(int rep, int frame, int var) const {
        return values[(static_cast<std::size_t>(rep) * m + frame) * d + var];
    }
    double& at(int rep, int frame, int var) {
        return values[(static_cast<std::size_t>(rep) * m + frame) * d + var];
    }
    void validate() const;
};

// ER draw under a random topological permutation: every unordered pair gets a
// forward-oriented edge with probability edge_prob, all self loops included.
SummaryGraph random_summary_graph(int d, double edge_prob, std::uint64_t seed);

struct SimConfig {
    int n = 1;
    int T = 3;            // post burn-in steps; frames kept at t = 1, k+1, ... <= T
    int k = 2;
    int burn_in = 100;
    std::uint64_t seed = 0;
    double overflow_threshold = 1e9;
    int max_retries = 3;  // halve all weights and retry on overflow
};

// X_i(t) = sum_{j in PA_i} f_ij(X_j(t-1)) + N_i, fresh noise per (i, t).
// Replicate streams are derived from (seed, replicate), so runs extend
// bit-identically when T grows and parallel generation cannot reorder draws.
TimeSeriesDataset simulate(const SummaryGraph& g, const MechanismSpec& mech, const SimConfig& cfg,
                           const std::vector<std::string>& names = {});

std::string write_dataset_csv(const TimeSeriesDataset& ds);
std::string write_dataset_meta(const TimeSeriesDataset& ds, const SimConfig& cfg,
                               const MechanismSpec& mech);

// Reads data.csv + meta.txt written by the CLI's simulate subcommand.
TimeSeriesDataset read_dataset_dir(const std::filesystem::path& dir);

}  // namespace svardisc
