#include "svardisc/ci.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "svardisc/rng.hpp"
#include "svardisc/stats.hpp"

namespace svardisc {

void CiQuery::validate_disjoint() const {
    if (x == y) throw InvalidArgument("CiQuery: x == y");
    for (const auto& v : z)
        if (v == x || v == y) throw InvalidArgument("CiQuery: z overlaps {x, y}");
}

CiVerdict oracle_ci(const FullTimeDag& g, const CiQuery& q) {
    q.validate_disjoint();
    std::set<TimeVertex> zs(q.z.begin(), q.z.end());
    const bool indep = d_separated(g, {q.x}, {q.y}, zs);
    return CiVerdict{indep, indep ? 0.0 : 1.0, 0.5, "oracle"};
}

PooledFrames::PooledFrames(const TimeSeriesDataset& ds) {
    ds.validate();
    if (ds.m < 2) throw InvalidArgument("PooledFrames: need at least two observed frames");
    d_ = ds.d;
    k_ = ds.k;
    rows_ = ds.n * (ds.m - 1);
    early_.assign(d_, std::vector<double>(rows_));
    late_.assign(d_, std::vector<double>(rows_));
    int r = 0;
    for (int rep = 0; rep < ds.n; ++rep) {
        for (int f = 0; f + 1 < ds.m; ++f, ++r) {
            for (int i = 0; i < d_; ++i) {
                early_[i][r] = ds.at(rep, f, i);
                late_[i][r] = ds.at(rep, f + 1, i);
            }
        }
    }
}

const std::vector<double>& PooledFrames::column(TimeVertex v) const {
    if (v.var < 0 || v.var >= d_) throw InvalidArgument("PooledFrames: variable out of range");
    if (v.t == 1) return early_[v.var];
    if (v.t == 1 + k_) return late_[v.var];
    throw InvalidArgument("PooledFrames: window vertices live at t=1 or t=1+k");
}

namespace {

// Residuals of y after least squares on columns xs plus an intercept.
std::vector<double> residualize(const std::vector<double>& y,
                                const std::vector<const std::vector<double>*>& xs) {
    const int n = static_cast<int>(y.size());
    if (xs.empty()) {
        double mean = 0;
        for (double v : y) mean += v;
        mean /= n;
        std::vector<double> out(y.size());
        for (int i = 0; i < n; ++i) out[i] = y[i] - mean;
        return out;
    }
    const int p = static_cast<int>(xs.size()) + 1;
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd Y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int j = 0; j < p - 1; ++j) X(i, j + 1) = (*xs[j])[i];
        Y(i) = y[i];
    }
    Eigen::MatrixXd G = X.transpose() * X;
    G.diagonal().array() += 1e-10;
    Eigen::VectorXd beta = G.ldlt().solve(X.transpose() * Y);
    Eigen::VectorXd r = Y - X * beta;
    return std::vector<double>(r.data(), r.data() + n);
}

}  // namespace

int plain_ci_min_rows(int cond_dim) { return std::max(30, 10 * (cond_dim + 2)); }

CiVerdict plain_ci_test(const PooledFrames& data, const CiQuery& q, double alpha,
                        const PlainCiOptions& opts) {
    q.validate_disjoint();
    if (!q.proxy_map.empty())
        throw InvalidArgument("plain_ci_test: proxy_map must be empty");
    const int n = data.rows();
    const int zdim = static_cast<int>(q.z.size());
    if (n < plain_ci_min_rows(zdim)) {
        std::ostringstream msg;
        msg << "plain_ci_test: " << n << " rows < required " << plain_ci_min_rows(zdim)
            << " for |z|=" << zdim;
        throw InsufficientSamples(msg.str());
    }

    auto xs = normal_scores(data.column(q.x));
    auto ys = normal_scores(data.column(q.y));
    std::vector<std::vector<double>> zvals;
    zvals.reserve(q.z.size());
    for (const auto& zv : q.z) zvals.push_back(normal_scores(data.column(zv)));
    std::vector<const std::vector<double>*> zp;
    for (const auto& zc : zvals) zp.push_back(&zc);
    auto rx = residualize(xs, zp);
    auto ry = residualize(ys, zp);
    const double r = pearson(rx, ry);

    if (opts.method == PlainCiMethod::kFisherZ) {
        const double dof = n - zdim - 3;
        const double rr = std::clamp(r, -0.999999, 0.999999);
        const double z = std::abs(std::atanh(rr)) * std::sqrt(std::max(1.0, dof));
        const double p = 2.0 * (1.0 - normal_cdf(z));
        return CiVerdict{p >= alpha, z, p, "rank_partial_corr"};
    }

    auto rng = make_rng({opts.seed, 0x9ce7ull,
                         static_cast<std::uint64_t>(q.x.var * 1000 + q.x.t),
                         static_cast<std::uint64_t>(q.y.var * 1000 + q.y.t)});
    const double obs = std::abs(r);
    int ge = 0;
    std::vector<double> perm = rx;
    for (int it = 0; it < opts.n_perms; ++it) {
        seeded_shuffle(perm.begin(), perm.end(), rng);
        if (std::abs(pearson(perm, ry)) >= obs) ++ge;
    }
    const double p = (1.0 + ge) / (opts.n_perms + 1.0);
    return CiVerdict{p >= alpha, obs, p, "perm_partial_corr"};
}

CiVerdict plain_ci_test(const TimeSeriesDataset& data, const CiQuery& q, double alpha,
                        const PlainCiOptions& opts) {
    return plain_ci_test(PooledFrames(data), q, alpha, opts);
}

namespace {

struct ProxyLayout {
    int ja, lb, rw;
};

ProxyLayout proxy_layout(int n, int n_bins, int n_proxies) {
    ProxyLayout L;
    L.lb = std::max(3, n_bins / 2);
    L.rw = n_bins;
    const int ja_cap = n / 25;  // keep every a-bin populated with >= 25 rows
    L.ja = std::min(std::max(2 * n_bins, n_proxies * L.rw + 5), ja_cap);
    if (L.ja < n_proxies * L.rw + 5)
        L.rw = std::max(3, (L.ja - 5) / std::max(1, n_proxies));
    if (L.ja < 6 || L.rw < 3 || L.lb < 3 || n_proxies * L.rw + 5 > L.ja) {
        std::ostringstream msg;
        msg << "proxy_linearity_test: cannot fit " << n_proxies << " proxies at n=" << n
            << " without dropping below 3 bins";
        throw InsufficientSamples(msg.str());
    }
    return L;
}

// ||Pb - K Pw||_F for the least-squares K, with count matrices built from bin
// labels; a_bins may be a permuted view.
double proxy_residual(const std::vector<int>& a_bins, const std::vector<int>& b_bins,
                      const std::vector<std::vector<int>>& w_bins, const ProxyLayout& L) {
    const int n = static_cast<int>(a_bins.size());
    const int wrows = 1 + static_cast<int>(w_bins.size()) * L.rw;
    Eigen::MatrixXd Pb = Eigen::MatrixXd::Zero(L.lb, L.ja);
    Eigen::MatrixXd Pw = Eigen::MatrixXd::Zero(wrows, L.ja);
    Eigen::VectorXd colcount = Eigen::VectorXd::Zero(L.ja);
    for (int i = 0; i < n; ++i) {
        const int j = a_bins[i];
        colcount(j) += 1.0;
        Pb(b_bins[i], j) += 1.0;
        for (std::size_t w = 0; w < w_bins.size(); ++w)
            Pw(1 + static_cast<int>(w) * L.rw + w_bins[w][i], j) += 1.0;
    }
    for (int j = 0; j < L.ja; ++j) {
        const double c = std::max(colcount(j), 1.0);
        Pb.col(j) /= c;
        Pw.col(j) /= c;
        Pw(0, j) = 1.0;
    }
    Eigen::MatrixXd G = Pw * Pw.transpose();
    G.diagonal().array() += 1e-8;
    Eigen::MatrixXd K = G.ldlt().solve(Pw * Pb.transpose()).transpose();
    return (Pb - K * Pw).norm();
}

// Permutation strata: median splits on up to the first four s columns.
std::vector<std::vector<int>> strata_groups(const std::vector<std::vector<double>>& s_cols, int n) {
    const int used = std::min<int>(4, static_cast<int>(s_cols.size()));
    std::vector<int> stratum(n, 0);
    for (int c = 0; c < used; ++c) {
        auto ranks = stable_ranks(s_cols[c]);
        for (int i = 0; i < n; ++i)
            stratum[i] = stratum[i] * 2 + (ranks[i] * 2 >= n ? 1 : 0);
    }
    const int n_strata = 1 << used;
    std::vector<std::vector<int>> groups(n_strata);
    for (int i = 0; i < n; ++i) groups[stratum[i]].push_back(i);
    groups.erase(std::remove_if(groups.begin(), groups.end(),
                                [](const std::vector<int>& g) { return g.empty(); }),
                 groups.end());
    return groups;
}

}  // namespace

CiVerdict proxy_linearity_test(const PooledFrames& data, TimeVertex a, TimeVertex b,
                               const std::vector<TimeVertex>& w_set,
                               const std::vector<TimeVertex>& s_set, double alpha,
                               const ProxyOptions& opts) {
    if (w_set.empty())
        throw BackendError("proxy_linearity_test: empty proxy set (self causation provides none?)");
    const int n = data.rows();
    const auto L = proxy_layout(n, opts.n_bins, static_cast<int>(w_set.size()));

    std::vector<std::vector<double>> s_cols;
    s_cols.reserve(s_set.size());
    for (const auto& sv : s_set) s_cols.push_back(data.column(sv));
    std::vector<const std::vector<double>*> sp;
    for (const auto& sc : s_cols) sp.push_back(&sc);

    auto ra = residualize(data.column(a), sp);
    auto rb = residualize(data.column(b), sp);
    std::vector<std::vector<int>> w_bins;
    for (const auto& wv : w_set)
        w_bins.push_back(quantile_bins(residualize(data.column(wv), sp), L.rw));
    auto a_bins = quantile_bins(ra, L.ja);
    auto b_bins = quantile_bins(rb, L.lb);

    const double obs = proxy_residual(a_bins, b_bins, w_bins, L);

    auto groups = strata_groups(s_cols, n);
    auto rng = make_rng({opts.seed, 0x70726f78ull});
    std::vector<double> null_stats(opts.n_perms);
    std::vector<int> perm = a_bins;
    for (int it = 0; it < opts.n_perms; ++it) {
        for (const auto& g : groups) {
            for (std::size_t i = g.size(); i > 1; --i) {
                std::uniform_int_distribution<std::size_t> pick(0, i - 1);
                std::swap(perm[g[i - 1]], perm[g[pick(rng)]]);
            }
        }
        null_stats[it] = proxy_residual(perm, b_bins, w_bins, L);
    }
    std::sort(null_stats.begin(), null_stats.end());
    const int idx = std::min<int>(
        opts.n_perms - 1,
        static_cast<int>(std::ceil((1.0 - alpha) * (opts.n_perms + 1))) - 1);
    const double thr = null_stats[std::max(0, idx)];
    return CiVerdict{obs <= thr, obs, thr, "proxy_linearity"};
}

CiVerdict proxy_linearity_test(const TimeSeriesDataset& data, TimeVertex a, TimeVertex b,
                               const std::vector<TimeVertex>& w_set,
                               const std::vector<TimeVertex>& s_set, double alpha,
                               const ProxyOptions& opts) {
    return proxy_linearity_test(PooledFrames(data), a, b, w_set, s_set, alpha, opts);
}

OracleBackend::OracleBackend(SummaryGraph truth, int k)
    : truth_(std::move(truth)), k_(k), full_(unroll(truth_, k + 1, k)) {}

CiVerdict OracleBackend::window_ci(TimeVertex x, TimeVertex y, const std::vector<TimeVertex>& z) {
    CiQuery q{x, y, z, {}};
    return oracle_ci(full_, q);
}

CiVerdict OracleBackend::edge_ci(int a, int b, const std::set<int>& m_set,
                                 const std::set<int>& s_set) {
    std::set<TimeVertex> z;
    for (int m : m_set) z.insert({m, 2});
    for (int s : s_set) z.insert({s, 1});
    const bool indep = d_separated(full_, {TimeVertex{a, 1}}, {TimeVertex{b, 1 + k_}}, z);
    return CiVerdict{indep, indep ? 0.0 : 1.0, 0.5, "oracle"};
}

bool OracleBackend::proxy_valid(int a, const std::set<int>& m_set,
                                const std::set<int>& s_set) const {
    std::set<TimeVertex> z, proxies;
    for (int m : m_set) {
        z.insert({m, 2});
        proxies.insert({m, 1 + k_});
    }
    for (int s : s_set) z.insert({s, 1});
    // the conditioned M(2) entry of A itself is also the proxied vertex set's
    // member A(1+k); the d-separation claim covers the whole proxy set
    return d_separated(full_, {TimeVertex{a, 1}}, proxies, z);
}

DataBackend::DataBackend(const TimeSeriesDataset& ds, double alpha, std::uint64_t seed,
                         PlainCiOptions plain, ProxyOptions proxy)
    : pooled_(ds), alpha_(alpha), seed_(seed), plain_(plain), proxy_(proxy) {}

CiVerdict DataBackend::window_ci(TimeVertex x, TimeVertex y, const std::vector<TimeVertex>& z) {
    CiQuery q{x, y, z, {}};
    PlainCiOptions o = plain_;
    o.seed = mix_seed({seed_, 0x77636975ull, static_cast<std::uint64_t>(x.var * 7919 + x.t),
                       static_cast<std::uint64_t>(y.var * 7919 + y.t),
                       static_cast<std::uint64_t>(z.size())});
    return plain_ci_test(pooled_, q, alpha_, o);
}

CiVerdict DataBackend::edge_ci(int a, int b, const std::set<int>& m_set,
                               const std::set<int>& s_set) {
    const int k = pooled_.k();
    std::vector<TimeVertex> w, s;
    for (int m : m_set) w.push_back({m, 1 + k});  // proxy of M(2) is M(1+k)
    for (int sv : s_set) s.push_back({sv, 1});
    ProxyOptions o = proxy_;
    o.seed = mix_seed({seed_, 0x65636975ull, static_cast<std::uint64_t>(a),
                       static_cast<std::uint64_t>(b)});
    return proxy_linearity_test(pooled_, TimeVertex{a, 1}, TimeVertex{b, 1 + k}, w, s, alpha_, o);
}

}  // namespace svardisc
