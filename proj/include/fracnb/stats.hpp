#ifndef FRACNB_STATS_HPP
#define FRACNB_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "dist.hpp"
#include "errors.hpp"
#include "paths.hpp"

namespace fracnb::stats {

struct GofResult {
    std::string test;
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::size_t m = 0;
    int dof = -1;
    double level = 0.01;

    bool pass() const { return p_value >= level; }
};

struct MeanCi {
    double mean = 0.0;
    double stderr_ = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;

    bool contains(double v) const { return v >= lo && v <= hi; }
};

// Normal interval mean +- z * stderr; z = 3 by default.
template <class T>
MeanCi mean_ci(const std::vector<T>& x, double z = 3.0) {
    if (x.size() < 2) throw domain_error("mean_ci: requires at least two samples");
    double m = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (const T& v : x) {
        double d = double(v) - m;
        m += d / double(++k);
        m2 += d * (double(v) - m);
    }
    MeanCi c;
    c.n = x.size();
    c.mean = m;
    c.stderr_ = std::sqrt(m2 / (k - 1.0) / k);
    c.lo = m - z * c.stderr_;
    c.hi = m + z * c.stderr_;
    return c;
}

template <class T>
double sample_variance(const std::vector<T>& x) {
    if (x.size() < 2) throw domain_error("sample_variance: requires at least two samples");
    double m = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (const T& v : x) {
        double d = double(v) - m;
        m += d / double(++k);
        m2 += d * (double(v) - m);
    }
    return m2 / (k - 1.0);
}

// ---------------------------------------------------------------- distribution comparisons

inline dist::PmfTable empirical_pmf(const std::vector<std::int64_t>& samples) {
    if (samples.empty()) throw domain_error("empirical_pmf: empty sample");
    std::int64_t mx = *std::max_element(samples.begin(), samples.end());
    if (*std::min_element(samples.begin(), samples.end()) < 0) throw domain_error("empirical_pmf: negative count");
    if (mx > 10'000'000) mx = 10'000'000;
    dist::PmfTable t;
    t.law = "empirical";
    t.prob.assign(mx + 1, 0.0);
    const double w = 1.0 / samples.size();
    double tail = 0.0;
    for (std::int64_t v : samples) {
        if (v <= mx)
            t.prob[v] += w;
        else
            tail += w;
    }
    t.est_error.assign(t.prob.size(), 0.0);
    t.paths.assign(t.prob.size(), EvalPath::closed_form);
    t.tail_mass = tail;
    t.tail_bound = tail;
    t.tolerance = 1e-12;
    return t;
}

// Total variation on cells 0..K plus one tail cell, K = the shorter table's range.
inline double tv_distance(const dist::PmfTable& a, const dist::PmfTable& b) {
    if (a.prob.empty() || b.prob.empty()) throw domain_error("tv_distance: empty table");
    const std::size_t k = std::min(a.prob.size(), b.prob.size());
    double s = 0.0, ha = 0.0, hb = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        s += std::fabs(a.prob[i] - b.prob[i]);
        ha += a.prob[i];
        hb += b.prob[i];
    }
    const double ta = std::max(0.0, 1.0 - ha), tb = std::max(0.0, 1.0 - hb);
    return 0.5 * (s + std::fabs(ta - tb));
}

// Pearson chi-square against a fully specified table, pooling adjacent cells to expected counts >= min_expected.
inline GofResult chi_square_gof(const std::vector<std::int64_t>& samples, const dist::PmfTable& expected,
                                double min_expected = 5.0) {
    if (samples.size() < 100) throw domain_error("chi_square_gof: requires at least 100 samples");
    const std::size_t K = expected.prob.size();
    std::vector<double> obs(K + 1, 0.0), ex(K + 1, 0.0);
    for (std::int64_t v : samples) {
        if (v < 0) throw domain_error("chi_square_gof: negative count");
        obs[std::min<std::size_t>(static_cast<std::size_t>(v), K)] += 1.0;
    }
    const double N = double(samples.size());
    double head = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        ex[i] = N * expected.prob[i];
        head += expected.prob[i];
    }
    ex[K] = N * std::max(0.0, 1.0 - head);
    std::vector<double> po, pe;
    double co = 0.0, ce = 0.0;
    for (std::size_t i = 0; i <= K; ++i) {
        co += obs[i];
        ce += ex[i];
        if (ce >= min_expected) {
            po.push_back(co);
            pe.push_back(ce);
            co = ce = 0.0;
        }
    }
    if (ce > 0.0 || co > 0.0) {
        if (pe.empty()) {
            po.push_back(co);
            pe.push_back(ce);
        } else {
            po.back() += co;
            pe.back() += ce;
        }
    }
    GofResult r;
    r.test = "chi_square";
    r.n = samples.size();
    r.dof = static_cast<int>(pe.size()) - 1;
    double x2 = 0.0;
    for (std::size_t i = 0; i < pe.size(); ++i) {
        if (pe[i] <= 0.0) {
            if (po[i] > 0.0) x2 = std::numeric_limits<double>::infinity();
            continue;
        }
        x2 += (po[i] - pe[i]) * (po[i] - pe[i]) / pe[i];
    }
    r.statistic = x2;
    if (r.dof < 1)
        r.p_value = 1.0;
    else if (!std::isfinite(x2))
        r.p_value = 0.0;
    else
        r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * x2);
    return r;
}

// Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lam) {
    if (lam < 0.2) return 1.0;
    double s = 0.0, sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lam * lam);
        s += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

// Two-sample Kolmogorov-Smirnov with the Stephens-corrected asymptotic p-value.
template <class T>
GofResult ks_two_sample(std::vector<T> x, std::vector<T> y) {
    if (x.empty() || y.empty()) throw domain_error("ks_two_sample: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = double(x.size()), m = double(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        T v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::fabs(i / n - j / m));
    }
    GofResult r;
    r.test = "ks_two_sample";
    r.statistic = d;
    r.n = x.size();
    r.m = y.size();
    const double en = std::sqrt(n * m / (n + m));
    r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
    return r;
}

// One-sample KS against a continuous CDF.
template <class F>
GofResult ks_one_sample(std::vector<double> x, F&& cdf) {
    if (x.empty()) throw domain_error("ks_one_sample: empty sample");
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double f = cdf(x[i]);
        d = std::max({d, std::fabs(f - i / n), std::fabs((i + 1) / n - f)});
    }
    GofResult r;
    r.test = "ks_one_sample";
    r.statistic = d;
    r.n = x.size();
    const double en = std::sqrt(n);
    r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
    return r;
}

// ---------------------------------------------------------------- dependence curves

struct CurvePoint {
    double t = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
    bool degenerate = false;
};

enum class Dependence { lrd, srd, other };

inline const char* to_string(Dependence d) {
    switch (d) {
        case Dependence::lrd: return "LRD";
        case Dependence::srd: return "SRD";
        case Dependence::other: return "other";
    }
    return "other";
}

struct ExponentFit {
    double d = 0.0;  // value ~ t^{-d}
    double intercept = 0.0;
    double t0 = 0.0;
    double t1 = 0.0;
    double stderr_ = 0.0;
    std::size_t points = 0;
    Dependence classification = Dependence::other;

    double slope() const { return -d; }
};

inline Dependence classify(double d) {
    if (d > 0.0 && d < 1.0) return Dependence::lrd;
    if (d > 1.0 && d < 2.0) return Dependence::srd;
    return Dependence::other;
}

// Least squares of log value on log t over points with t in [t0, t1].
inline ExponentFit fit_power_exponent(const std::vector<CurvePoint>& curve, double t0, double t1) {
    std::vector<double> lx, ly;
    for (const auto& p : curve) {
        if (p.t < t0 || p.t > t1) continue;
        if (!(p.value > 0.0)) throw domain_error("fit_power_exponent: nonpositive value in window");
        lx.push_back(std::log(p.t));
        ly.push_back(std::log(p.value));
    }
    if (lx.size() < 5) throw domain_error("fit_power_exponent: requires at least 5 points in window");
    const double k = double(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double e = ly[i] - my - slope * (lx[i] - mx);
        rss += e * e;
    }
    ExponentFit f;
    f.d = -slope;
    f.intercept = my - slope * mx;
    f.t0 = t0;
    f.t1 = t1;
    f.points = lx.size();
    f.stderr_ = k > 2 ? std::sqrt(rss / (k - 2.0) / sxx) : 0.0;
    f.classification = classify(f.d);
    return f;
}

inline std::vector<double> log_grid(double t0, double t1, int points) {
    if (points < 2 || !(t0 > 0.0) || !(t1 > t0)) throw domain_error("log_grid: requires 0 < t0 < t1 and points >= 2");
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = t0 * std::pow(t1 / t0, double(i) / (points - 1));
    return g;
}

namespace detail {

inline CurvePoint pearson(double t, const std::vector<double>& a, const std::vector<double>& b) {
    const double n = double(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    CurvePoint p;
    p.t = t;
    if (saa <= 0.0 || sbb <= 0.0) {
        p.degenerate = true;
        return p;
    }
    p.value = sab / std::sqrt(saa * sbb);
    p.stderr_ = (1.0 - p.value * p.value) / std::sqrt(std::max(1.0, n - 3.0));
    return p;
}

inline std::vector<double> merged_times(std::vector<double> t) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

inline std::size_t index_of(const std::vector<double>& grid, double t) {
    return static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), t) - grid.begin());
}

}  // namespace detail

// Pearson Corr[X(s), X(t)] across replicas, one coupled path per replica.
inline std::vector<CurvePoint> corr_curve(const dist::ProcessLaw& law, double s, const std::vector<double>& t_grid,
                                          std::size_t replicas, std::uint64_t seed, double mesh = 1e-2,
                                          unsigned threads = 0) {
    if (t_grid.empty()) throw domain_error("corr_curve: empty time grid");
    if (!(s > 0.0) || s > *std::min_element(t_grid.begin(), t_grid.end()))
        throw domain_error("corr_curve: requires 0 < s <= min(t_grid)");
    std::vector<double> all = t_grid;
    all.push_back(s);
    paths::PathConfig cfg;
    cfg.times = detail::merged_times(all);
    cfg.mesh = mesh;
    cfg.replicas = replicas;
    auto ps = paths::sample_paths(law, cfg, seed, threads);
    const std::size_t is = detail::index_of(cfg.times, s);
    std::vector<double> xs(replicas);
    for (std::size_t r = 0; r < replicas; ++r) xs[r] = ps[r].values[is];
    std::vector<CurvePoint> out;
    for (double t : t_grid) {
        if (t == s) {
            out.push_back({t, 1.0, 0.0, false});
            continue;
        }
        const std::size_t it = detail::index_of(cfg.times, t);
        std::vector<double> xt(replicas);
        for (std::size_t r = 0; r < replicas; ++r) xt[r] = ps[r].values[it];
        out.push_back(detail::pearson(t, xs, xt));
    }
    return out;
}

// Corr of (Q(s+delta) - Q(s), Q(t+delta) - Q(t)) across coupled FNBP replicas.
inline std::vector<CurvePoint> increment_corr_curve(const dist::FnbpLaw& law, double delta, double s,
                                                    const std::vector<double>& t_grid, std::size_t replicas,
                                                    std::uint64_t seed, double mesh = 1e-2, unsigned threads = 0) {
    if (!(delta > 0.0)) throw domain_error("increment_corr_curve: requires delta > 0");
    if (t_grid.empty() || *std::min_element(t_grid.begin(), t_grid.end()) <= s + delta)
        throw domain_error("increment_corr_curve: requires min(t_grid) > s + delta");
    std::vector<double> all{s, s + delta};
    for (double t : t_grid) {
        all.push_back(t);
        all.push_back(t + delta);
    }
    paths::PathConfig cfg;
    cfg.times = detail::merged_times(all);
    cfg.mesh = mesh;
    cfg.replicas = replicas;
    auto ps = paths::fnbp_paths(law, cfg, seed, threads);
    auto inc = [&](double a) {
        std::size_t i0 = detail::index_of(cfg.times, a), i1 = detail::index_of(cfg.times, a + delta);
        std::vector<double> v(replicas);
        for (std::size_t r = 0; r < replicas; ++r) v[r] = ps[r].values[i1] - ps[r].values[i0];
        return v;
    };
    auto xs = inc(s);
    std::vector<CurvePoint> out;
    for (double t : t_grid) out.push_back(detail::pearson(t, xs, inc(t)));
    return out;
}

// Analytic FNBP correlation from the quadrature covariance.
inline double fnbp_corr(double s, double t, const dist::FnbpLaw& law) {
    return dist::fnbp_cov(s, t, law) / std::sqrt(dist::fnbp_var(s, law) * dist::fnbp_var(t, law));
}

// Analytic FNBP increment correlation assembled from the quadrature covariance.
inline double fnbp_increment_corr(double delta, double s, double t, const dist::FnbpLaw& law) {
    if (!(t >= s + delta)) throw argument_order_error("fnbp_increment_corr: requires t >= s + delta");
    auto cov = [&](double a, double b) { return a == b ? dist::fnbp_var(a, law) : dist::fnbp_cov(a, b, law); };
    auto var_inc = [&](double a) { return cov(a + delta, a + delta) - 2.0 * cov(a, a + delta) + cov(a, a); };
    double c = cov(s + delta, t + delta) - cov(s + delta, t) - cov(s, t + delta) + cov(s, t);
    return c / std::sqrt(var_inc(s) * var_inc(t));
}

inline std::vector<CurvePoint> fnbp_corr_curve_quadrature(const dist::FnbpLaw& law, double s, const std::vector<double>& t_grid) {
    std::vector<CurvePoint> out;
    for (double t : t_grid) out.push_back({t, t == s ? 1.0 : fnbp_corr(s, t, law), 0.0, false});
    return out;
}

inline std::vector<CurvePoint> fnbp_increment_corr_curve_quadrature(const dist::FnbpLaw& law, double delta, double s,
                                                                    const std::vector<double>& t_grid) {
    std::vector<CurvePoint> out;
    for (double t : t_grid) out.push_back({t, fnbp_increment_corr(delta, s, t, law), 0.0, false});
    return out;
}

// ---------------------------------------------------------------- self-similarity and limits

enum class SimilarityKind { stable, inverse, iterated };

// KS between X(ct) and c^H X(t), H = 1/beta, beta or prod(betas); index_override replaces H for power checks.
inline GofResult self_similarity_test(SimilarityKind kind, const std::vector<double>& betas, double t, double c,
                                      std::size_t samples, std::uint64_t seed, double index_override = NAN) {
    if (!(c > 0.0)) throw domain_error("self_similarity_test: requires c > 0");
    if (betas.empty()) throw domain_error("self_similarity_test: requires beta");
    double h = 0.0;
    auto draw = [&](double time, RngStream& r) {
        switch (kind) {
            case SimilarityKind::stable: return paths::stable_at(betas[0], time, r);
            case SimilarityKind::inverse: return paths::inverse_stable_marginal(betas[0], time, r);
            case SimilarityKind::iterated: return paths::iterated_inverse_marginal(betas, time, r);
        }
        return 0.0;
    };
    switch (kind) {
        case SimilarityKind::stable: h = 1.0 / betas[0]; break;
        case SimilarityKind::inverse: h = betas[0]; break;
        case SimilarityKind::iterated:
            h = 1.0;
            for (double b : betas) h *= b;
            break;
    }
    if (!std::isnan(index_override)) h = index_override;
    const double scale = std::pow(c, h);
    auto x = paths::ensemble(samples, seed, [&](RngStream& r, std::size_t) { return draw(c * t, r); }, 0, 0);
    auto y = paths::ensemble(samples, seed, [&](RngStream& r, std::size_t) { return scale * draw(t, r); }, 0, samples);
    GofResult g = ks_two_sample(std::move(x), std::move(y));
    g.test = "self_similarity";
    return g;
}

// KS between jittered N(t)/t^beta (resp. Q(t)/t^beta) and the limit law lambda (p/alpha)^beta E_beta(1).
inline GofResult renewal_limit_check(const dist::ProcessLaw& law, double t, std::size_t replicas, std::uint64_t seed,
                                     unsigned threads = 0) {
    if (law.kind != dist::ProcessKind::fpp && law.kind != dist::ProcessKind::fnbp)
        throw domain_error("renewal_limit_check: requires an fpp or fnbp law");
    const double b = law.beta;
    double factor = law.lambda;
    if (law.kind == dist::ProcessKind::fnbp) factor *= std::pow(law.gamma.p / law.gamma.alpha, b);
    const double tb = std::pow(t, b);
    auto x = paths::ensemble(replicas, seed,
                             [&](RngStream& r, std::size_t) {
                                 double n = double(paths::sample_at(law, t, r));
                                 return (n + r.uniform() - 0.5) / tb;
                             },
                             threads, 0);
    auto y = paths::ensemble(replicas, seed,
                             [&](RngStream& r, std::size_t) { return factor * paths::inverse_stable_marginal(b, 1.0, r); },
                             threads, replicas);
    GofResult g = ks_two_sample(std::move(x), std::move(y));
    g.test = "renewal_limit";
    return g;
}

// ---------------------------------------------------------------- increments

// P(X(a,a+l1] = n, X(a+l1, a+l1+l2] = m) for the Polya process.
inline double polya_joint_increment_pmf(int n, int m, double l1, double l2, const dist::GammaLaw& g) {
    using specfun::detail::lgam;
    double l = lgam(g.p + n + m) - lgam(g.p) - lgam(n + 1.0) - lgam(m + 1.0) + g.p * std::log(g.alpha) -
               (g.p + n + m) * std::log(g.alpha + l1 + l2);
    if (n > 0) l += n * std::log(l1);
    if (m > 0) l += m * std::log(l2);
    return std::exp(l);
}

inline double polya_product_increment_pmf(int n, int m, double l1, double l2, const dist::GammaLaw& g) {
    return dist::polya_pmf(n, l1, g) * dist::polya_pmf(m, l2, g);
}

struct IndependenceReport {
    int n = 0, m = 0;
    std::size_t replicas = 0;
    double joint_empirical = 0.0;
    double joint_stderr = 0.0;
    double product_empirical = 0.0;
    double joint_closed = NAN;
    double product_closed = NAN;
    GofResult independence;  // chi-square test on the 2x2 table of indicators
    double z_joint = NAN;    // empirical joint vs closed joint
    double z_product = NAN;  // empirical joint vs closed product

    bool matches_joint(double z = 3.0) const { return std::isnan(z_joint) || std::fabs(z_joint) <= z; }
    bool rejects_product(double z = 3.0) const { return !std::isnan(z_product) && std::fabs(z_product) > z; }
};

// Joint law of increments over (a,b] and (b,c] from coupled paths.
inline IndependenceReport increment_independence_check(const dist::ProcessLaw& law, double a, double b, double c, int n,
                                                       int m, std::size_t replicas, std::uint64_t seed,
                                                       unsigned threads = 0) {
    if (!(a >= 0.0 && b > a && c > b)) throw domain_error("increment_independence_check: requires 0 <= a < b < c");
    paths::PathConfig cfg;
    cfg.times = detail::merged_times({0.0, a, b, c});
    cfg.replicas = replicas;
    auto ps = paths::sample_paths(law, cfg, seed, threads);
    const std::size_t ia = detail::index_of(cfg.times, a), ib = detail::index_of(cfg.times, b),
                      ic = detail::index_of(cfg.times, c);
    double k11 = 0, k10 = 0, k01 = 0, k00 = 0;
    for (const auto& p : ps) {
        bool x = std::llround(p.values[ib] - p.values[ia]) == n;
        bool y = std::llround(p.values[ic] - p.values[ib]) == m;
        (x ? (y ? k11 : k10) : (y ? k01 : k00)) += 1.0;
    }
    const double N = double(replicas);
    IndependenceReport rep;
    rep.n = n;
    rep.m = m;
    rep.replicas = replicas;
    rep.joint_empirical = k11 / N;
    rep.joint_stderr = std::sqrt(rep.joint_empirical * (1.0 - rep.joint_empirical) / N);
    const double px = (k11 + k10) / N, py = (k11 + k01) / N;
    rep.product_empirical = px * py;
    double x2 = 0.0;
    const double obs[4] = {k11, k10, k01, k00};
    const double ex[4] = {N * px * py, N * px * (1 - py), N * (1 - px) * py, N * (1 - px) * (1 - py)};
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
        if (ex[i] <= 0.0) ok = false;
        else x2 += (obs[i] - ex[i]) * (obs[i] - ex[i]) / ex[i];
    }
    rep.independence.test = "chi_square_independence";
    rep.independence.n = replicas;
    rep.independence.dof = 1;
    rep.independence.statistic = ok ? x2 : 0.0;
    rep.independence.p_value = ok ? boost::math::gamma_q(0.5, 0.5 * x2) : 1.0;
    if (law.kind == dist::ProcessKind::polya) {
        rep.joint_closed = polya_joint_increment_pmf(n, m, b - a, c - b, law.gamma);
        rep.product_closed = polya_product_increment_pmf(n, m, b - a, c - b, law.gamma);
    } else if (law.kind == dist::ProcessKind::poisson) {
        rep.joint_closed = rep.product_closed = dist::poisson_pmf(n, b - a, law.lambda) * dist::poisson_pmf(m, c - b, law.lambda);
    }
    if (!std::isnan(rep.joint_closed)) {
        const double se_j = std::sqrt(rep.joint_closed * (1.0 - rep.joint_closed) / N);
        const double se_p = std::sqrt(rep.product_closed * (1.0 - rep.product_closed) / N);
        rep.z_joint = (rep.joint_empirical - rep.joint_closed) / se_j;
        rep.z_product = (rep.joint_empirical - rep.product_closed) / se_p;
    }
    return rep;
}

struct StationarityReport {
    std::vector<double> base_times;
    std::vector<GofResult> pairs;
    double min_p = 1.0;
    double level = 0.01;

    // Bonferroni over the pairwise comparisons.
    bool stationary() const { return min_p >= level / std::max<std::size_t>(1, pairs.size()); }
};

// Pairwise KS between increment samples X(t+delta) - X(t) at each base time, independent replicas per time.
inline StationarityReport stationarity_check(const dist::ProcessLaw& law, double delta, const std::vector<double>& t_list,
                                             std::size_t replicas, std::uint64_t seed, double mesh = 1e-3,
                                             unsigned threads = 0) {
    if (t_list.size() < 2) throw domain_error("stationarity_check: requires at least two base times");
    if (!(delta > 0.0)) throw domain_error("stationarity_check: requires delta > 0");
    std::vector<std::vector<double>> inc;
    for (std::size_t k = 0; k < t_list.size(); ++k) {
        paths::PathConfig cfg;
        cfg.times = detail::merged_times({0.0, t_list[k], t_list[k] + delta});
        cfg.mesh = mesh;
        const std::size_t i0 = detail::index_of(cfg.times, t_list[k]), i1 = detail::index_of(cfg.times, t_list[k] + delta);
        inc.push_back(paths::ensemble(replicas, seed,
                                      [&](RngStream& r, std::size_t) {
                                          auto p = paths::sample_path(law, cfg, r);
                                          return p.values[i1] - p.values[i0];
                                      },
                                      threads, k * replicas));
    }
    StationarityReport rep;
    rep.base_times = t_list;
    for (std::size_t i = 0; i < inc.size(); ++i)
        for (std::size_t j = i + 1; j < inc.size(); ++j) {
            rep.pairs.push_back(ks_two_sample(inc[i], inc[j]));
            rep.min_p = std::min(rep.min_p, rep.pairs.back().p_value);
        }
    return rep;
}

// ---------------------------------------------------------------- overdispersion

struct OverdispersionReport {
    double mean = 0.0;
    double variance = 0.0;
    double excess = 0.0;  // variance - mean
    double excess_stderr = 0.0;
    bool overdispersed = false;
};

inline OverdispersionReport overdispersion(const std::vector<std::int64_t>& x) {
    const double n = double(x.size());
    if (x.size() < 100) throw domain_error("overdispersion: requires at least 100 samples");
    MeanCi c = mean_ci(x);
    double v = sample_variance(x);
    // stderr of the sample variance from the fourth central moment
    double m4 = 0.0;
    for (auto k : x) {
        double d = double(k) - c.mean;
        m4 += d * d * d * d;
    }
    m4 /= n;
    OverdispersionReport r;
    r.mean = c.mean;
    r.variance = v;
    r.excess = v - c.mean;
    r.excess_stderr = std::sqrt(std::max(0.0, (m4 - v * v) / n) + c.stderr_ * c.stderr_);
    r.overdispersed = r.excess > 3.0 * r.excess_stderr;
    return r;
}

}  // namespace fracnb::stats

#endif
