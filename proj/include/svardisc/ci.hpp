#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "svardisc/full_time_dag.hpp"
#include "svardisc/simulate.hpp"
#include "svardisc/types.hpp"

namespace svardisc {

struct CiQuery {
    TimeVertex x, y;
    std::vector<TimeVertex> z;
    // Unobserved conditioning vertices and the observed vertex standing in for
    // each; oracle backends ignore this and condition on the true vertices.
    std::map<TimeVertex, TimeVertex> proxy_map;

    void validate_disjoint() const;
};

struct CiVerdict {
    bool independent = false;
    double statistic = 0.0;
    double threshold_or_pvalue = 0.0;
    std::string method;
};

// CI == d-separation in the full time graph (Markov + faithfulness oracle).
CiVerdict oracle_ci(const FullTimeDag& g, const CiQuery& q);

// Pooled two-frame view: every adjacent observed frame pair of every replicate
// becomes one row; a window vertex at t=1 reads the early frame, at t=1+k the
// late frame.
class PooledFrames {
public:
    explicit PooledFrames(const TimeSeriesDataset& ds);
    int rows() const { return rows_; }
    int d() const { return d_; }
    int k() const { return k_; }
    const std::vector<double>& column(TimeVertex v) const;

private:
    int rows_, d_, k_;
    std::vector<std::vector<double>> early_, late_;
};

enum class PlainCiMethod { kFisherZ, kPermutation };

struct PlainCiOptions {
    PlainCiMethod method = PlainCiMethod::kFisherZ;
    int n_perms = 200;
    std::uint64_t seed = 0;
};

// Minimum pooled rows accepted for a conditioning set of the given size.
int plain_ci_min_rows(int cond_dim);

// Rank (normal-scores) partial correlation of x and y given z, Fisher-z
// p-value by default or a permutation p-value on request.
CiVerdict plain_ci_test(const PooledFrames& data, const CiQuery& q, double alpha,
                        const PlainCiOptions& opts = {});
CiVerdict plain_ci_test(const TimeSeriesDataset& data, const CiQuery& q, double alpha,
                        const PlainCiOptions& opts = {});

struct ProxyOptions {
    int n_bins = 10;   // w bins; a uses 2*n_bins, b uses max(3, n_bins/2)
    int n_perms = 200;
    std::uint64_t seed = 0;
};

// Proxy linearity test: residualize a, b, w on s; quantile-bin; least-squares
// regress the P(b-bin | a-bin) matrix on the stacked P(w-bin | a-bin)
// matrices; compare the residual norm against a permutation-calibrated
// threshold (permutations of a within strata of s).  independent=true retains
// the null "no direct edge".
CiVerdict proxy_linearity_test(const PooledFrames& data, TimeVertex a, TimeVertex b,
                               const std::vector<TimeVertex>& w_set,
                               const std::vector<TimeVertex>& s_set, double alpha,
                               const ProxyOptions& opts = {});
CiVerdict proxy_linearity_test(const TimeSeriesDataset& data, TimeVertex a, TimeVertex b,
                               const std::vector<TimeVertex>& w_set,
                               const std::vector<TimeVertex>& s_set, double alpha,
                               const ProxyOptions& opts = {});

// Backend shared by skeleton search and edge resolution.  Window vertices use
// the canonical two-frame labels t=1 (early) and t=1+k (late).
class CiBackend {
public:
    virtual ~CiBackend() = default;
    virtual int var_count() const = 0;
    virtual int window_k() const = 0;
    virtual std::string kind() const = 0;
    virtual std::uint64_t seed() const { return 0; }
    // plain CI between observed window vertices given observed window vertices
    virtual CiVerdict window_ci(TimeVertex x, TimeVertex y, const std::vector<TimeVertex>& z) = 0;
    // edge resolution query: is A(t) independent of B(t+k) given M(t+1), S(t)?
    virtual CiVerdict edge_ci(int a, int b, const std::set<int>& m_set,
                              const std::set<int>& s_set) = 0;
};

class OracleBackend : public CiBackend {
public:
    OracleBackend(SummaryGraph truth, int k);
    int var_count() const override { return truth_.d; }
    int window_k() const override { return k_; }
    std::string kind() const override { return "oracle"; }
    CiVerdict window_ci(TimeVertex x, TimeVertex y, const std::vector<TimeVertex>& z) override;
    CiVerdict edge_ci(int a, int b, const std::set<int>& m_set,
                      const std::set<int>& s_set) override;

    // proxy validity condition: A(1) independent of M(1+k) given M(2) and S(1).
    bool proxy_valid(int a, const std::set<int>& m_set, const std::set<int>& s_set) const;

    const FullTimeDag& full() const { return full_; }
    const SummaryGraph& truth() const { return truth_; }

private:
    SummaryGraph truth_;
    int k_;
    FullTimeDag full_;
};

class DataBackend : public CiBackend {
public:
    DataBackend(const TimeSeriesDataset& ds, double alpha, std::uint64_t seed,
                PlainCiOptions plain = {}, ProxyOptions proxy = {});
    int var_count() const override { return pooled_.d(); }
    int window_k() const override { return pooled_.k(); }
    std::string kind() const override { return "data"; }
    std::uint64_t seed() const override { return seed_; }
    CiVerdict window_ci(TimeVertex x, TimeVertex y, const std::vector<TimeVertex>& z) override;
    CiVerdict edge_ci(int a, int b, const std::set<int>& m_set,
                      const std::set<int>& s_set) override;
    const PooledFrames& pooled() const { return pooled_; }

private:
    PooledFrames pooled_;
    double alpha_;
    std::uint64_t seed_;
    PlainCiOptions plain_;
    ProxyOptions proxy_;
};

}  // namespace svardisc
