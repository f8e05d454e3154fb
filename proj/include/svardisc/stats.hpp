#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace svardisc {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Acklam's rational approximation of the standard normal quantile,
// |relative error| < 1.15e-9 on (0, 1).
double normal_quantile(double p);

// Ordinal ranks with stable tie-breaking by index; rank values in [0, n).
std::vector<int> stable_ranks(const std::vector<double>& x);

// Van der Waerden normal scores: Phi^{-1}((rank + 1) / (n + 1)).
std::vector<double> normal_scores(const std::vector<double>& x);

// Equal-count quantile bin labels in [0, n_bins) from stable ranks.
std::vector<int> quantile_bins(const std::vector<double>& x, int n_bins);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace svardisc
