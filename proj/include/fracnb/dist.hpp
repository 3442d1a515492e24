#ifndef FRACNB_DIST_HPP
#define FRACNB_DIST_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "series.hpp"
#include "specfun.hpp"

namespace fracnb::dist {

// Gamma subordinator G(alpha, p t): density proportional to y^{pt-1} e^{-alpha y}, scale 1/alpha.
struct GammaLaw {
    double alpha = 1.0;
    double p = 1.0;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw domain_error("GammaLaw: requires alpha > 0");
        if (!(p > 0.0) || !std::isfinite(p)) throw domain_error("GammaLaw: requires p > 0");
    }
    double shape(double t) const { return p * t; }
};

struct FppLaw {
    double beta = 1.0;
    double lambda = 1.0;

    void validate() const {
        if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("FppLaw: requires beta in (0,1]");
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("FppLaw: requires lambda > 0");
    }
    double q() const { return lambda / std::tgamma(1.0 + beta); }
    double d1() const { return 2.0 * lambda * lambda / std::tgamma(2.0 * beta + 1.0); }
    double d2() const { return beta * q() * q() * specfun::beta_fn(beta, 1.0 + beta); }
};

struct FnbpLaw {
    FppLaw fpp;
    GammaLaw gamma;

    void validate() const {
        fpp.validate();
        gamma.validate();
    }
    // lambda < alpha^beta: the generalized Wright series converges.
    bool series_domain() const { return fpp.lambda < std::pow(gamma.alpha, fpp.beta); }
};

struct SfppLaw {
    double beta = 1.0;
    GammaLaw gamma;

    void validate() const {
        if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("SfppLaw: requires beta in (0,1]");
        gamma.validate();
    }
};

enum class ProcessKind { poisson, fpp, fnbp, polya, sfpp };

inline const char* to_string(ProcessKind k) {
    switch (k) {
        case ProcessKind::poisson: return "poisson";
        case ProcessKind::fpp: return "fpp";
        case ProcessKind::fnbp: return "fnbp";
        case ProcessKind::polya: return "polya";
        case ProcessKind::sfpp: return "sfpp";
    }
    return "unknown";
}

// Tagged parameter record; unused fields are ignored by the selected process.
struct ProcessLaw {
    ProcessKind kind = ProcessKind::poisson;
    double beta = 1.0;
    double lambda = 1.0;
    GammaLaw gamma;

    static ProcessLaw poisson(double lambda) { return {ProcessKind::poisson, 1.0, lambda, {}}; }
    static ProcessLaw of(const FppLaw& l) { return {ProcessKind::fpp, l.beta, l.lambda, {}}; }
    static ProcessLaw of(const FnbpLaw& l) { return {ProcessKind::fnbp, l.fpp.beta, l.fpp.lambda, l.gamma}; }
    static ProcessLaw polya(const GammaLaw& g) { return {ProcessKind::polya, 1.0, 1.0, g}; }
    static ProcessLaw of(const SfppLaw& l) { return {ProcessKind::sfpp, l.beta, 1.0, l.gamma}; }

    FppLaw fpp() const { return {beta, lambda}; }
    FnbpLaw fnbp() const { return {{beta, lambda}, gamma}; }
    SfppLaw sfpp() const { return {beta, gamma}; }
};

struct PmfTable {
    std::string law;
    std::vector<std::pair<std::string, double>> params;
    double t = 0.0;
    std::vector<double> prob;
    std::vector<double> est_error;
    std::vector<EvalPath> paths;
    double tail_mass = 0.0;   // P(X > n_max), evaluated independently of the entries
    double tail_bound = 1.0;  // Markov bound, or 1 - sum of entries when the mean is infinite
    double tolerance = 1e-8;

    double entries_sum() const {
        double s = 0.0;
        for (double v : prob) s += v;
        return s;
    }
    bool normalized() const { return std::fabs(entries_sum() + tail_mass - 1.0) <= tolerance; }
    int n_max() const { return static_cast<int>(prob.size()) - 1; }
};

// ---------------------------------------------------------------- elementary laws

inline double log_poisson_pmf_mu(int n, double mu) {
    if (n < 0) return -quad::inf;
    if (mu == 0.0) return n == 0 ? 0.0 : -quad::inf;
    return n * std::log(mu) - mu - specfun::detail::lgam(n + 1.0);
}

inline double poisson_pmf(int n, double t, double lambda) {
    if (n < 0) throw domain_error("poisson_pmf: n must be nonnegative");
    if (!(t >= 0.0)) throw domain_error("poisson_pmf: requires t >= 0");
    return std::exp(log_poisson_pmf_mu(n, lambda * t));
}

// NB pmf with eta and 1-eta supplied separately to keep precision near eta = 1.
inline double nb_pmf_eta(int n, double shape, double eta, double one_minus_eta) {
    if (n < 0) return 0.0;
    if (eta == 0.0) return n == 0 ? 1.0 : 0.0;
    if (one_minus_eta == 0.0) return 0.0;
    using specfun::detail::lgam;
    double l = lgam(n + shape) - lgam(shape) - lgam(n + 1.0) + n * std::log(eta) + shape * std::log(one_minus_eta);
    return std::exp(l);
}

inline double nb_pmf(int n, double shape, double eta) {
    if (n < 0) throw domain_error("nb_pmf: n must be nonnegative");
    if (!(shape > 0.0)) throw domain_error("nb_pmf: requires shape > 0");
    if (!(eta >= 0.0 && eta < 1.0)) throw domain_error("nb_pmf: requires eta in [0,1)");
    return nb_pmf_eta(n, shape, eta, 1.0 - eta);
}

// P(X > m) for X ~ NB(shape, eta).
inline double nb_tail(int m, double shape, double eta, double one_minus_eta) {
    if (eta == 0.0) return 0.0;
    if (eta < 0.5) return boost::math::ibeta(m + 1.0, shape, eta);
    return boost::math::ibetac(shape, m + 1.0, one_minus_eta);
}

inline double gamma_moment(double t, const GammaLaw& g, double l) {
    g.validate();
    if (!(t > 0.0)) throw domain_error("gamma_moment: requires t > 0");
    if (!(l > 0.0)) throw domain_error("gamma_moment: requires l > 0");
    using specfun::detail::lgam;
    double k = g.shape(t);
    return std::exp(lgam(k + l) - lgam(k) - l * std::log(g.alpha));
}

inline double e_beta_mean(double t, double beta) {
    if (!(t >= 0.0)) throw domain_error("e_beta_mean: requires t >= 0");
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("e_beta_mean: requires beta in (0,1]");
    return std::pow(t, beta) / std::tgamma(1.0 + beta);
}

// (1/beta)(1/Gamma(2 beta) - 1/(beta Gamma(beta)^2))
inline double z_beta(double beta) {
    return (1.0 / std::tgamma(2.0 * beta) - 1.0 / (beta * std::tgamma(beta) * std::tgamma(beta))) / beta;
}

namespace detail {

inline double log_gamma_density(double y, double shape, double rate) { return quad::log_gamma_density(y, shape, rate); }

// Integrate f(z) M_beta(z) dz over the support where M_beta is representable.
template <class F>
quad::QuadResult m_wright_expectation(double beta, F&& f, std::vector<double> extra = {}, double rel_tol = 1e-12) {
    const double zc = specfun::m_wright_cutoff(beta, 745.0);
    std::vector<double> pts{0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, 8.0, zc};
    for (double e : extra)
        if (e > 0.0 && e < zc && std::isfinite(e)) pts.push_back(e);
    pts.erase(std::remove_if(pts.begin(), pts.end(), [&](double v) { return v > zc; }), pts.end());
    auto g = [&](double z) {
        double m = specfun::m_wright_value(beta, z);
        return m == 0.0 ? 0.0 : f(z) * m;
    };
    return quad::integrate_panels(g, pts, rel_tol);
}

inline bool accept(const SeriesValue& s, double rel = 1e-10) {
    return s.reliable && std::isfinite(s.value) && s.est_error <= rel * std::fabs(s.value) + 1e-300;
}

}  // namespace detail

// ---------------------------------------------------------------- FPP

inline SeriesValue fpp_pmf_series(int n, double t, const FppLaw& law, const SeriesControl& ctl = {}) {
    law.validate();
    if (n < 0) throw domain_error("fpp_pmf: n must be nonnegative");
    if (!(t >= 0.0)) throw domain_error("fpp_pmf: requires t >= 0");
    if (t == 0.0) return {n == 0 ? 1.0 : 0.0, 0.0, 0, true, EvalPath::closed_form};
    using specfun::detail::lgam;
    const double b = law.beta;
    const double lx = std::log(law.lambda) + b * std::log(t);
    const double ln_fact = lgam(n + 1.0);
    auto term = [&](int k) {
        int j = n + k;
        double l = lgam(j + 1.0) - lgam(k + 1.0) - ln_fact + j * lx - lgam(b * j + 1.0);
        return LogTerm{l, (k & 1) ? -1 : 1};
    };
    return sum_log_series(term, ctl, "fpp_pmf");
}

inline SeriesValue fpp_pmf_quadrature(int n, double t, const FppLaw& law) {
    law.validate();
    if (t == 0.0) return {n == 0 ? 1.0 : 0.0, 0.0, 0, true, EvalPath::closed_form};
    SeriesValue out;
    out.path = EvalPath::quadrature;
    if (law.beta == 1.0) {
        out.value = poisson_pmf(n, t, law.lambda);
        out.path = EvalPath::closed_form;
        return out;
    }
    const double x = law.lambda * std::pow(t, law.beta);
    auto r = detail::m_wright_expectation(
        law.beta, [&](double z) { return std::exp(log_poisson_pmf_mu(n, x * z)); }, {n / x, (n + 3.0 * std::sqrt(n + 1.0)) / x});
    out.value = r.value;
    out.est_error = r.error;
    out.reliable = std::isfinite(r.value) && r.error <= 1e-8 * std::fabs(r.value) + 1e-300;
    return out;
}

inline SeriesValue fpp_pmf(int n, double t, const FppLaw& law, const SeriesControl& ctl = {}) {
    std::string diag;
    try {
        SeriesValue s = fpp_pmf_series(n, t, law, ctl);
        if (detail::accept(s)) return s;
        diag = "series unreliable (est_error " + std::to_string(s.est_error) + ")";
    } catch (const truncation_error& e) {
        diag = e.what();
    }
    SeriesValue q = fpp_pmf_quadrature(n, t, law);
    if (q.reliable) return q;
    throw evaluation_error("fpp_pmf: no reliable evaluation path", diag + "; quadrature error " + std::to_string(q.est_error));
}

inline double fpp_mean(double t, const FppLaw& law) {
    law.validate();
    return law.q() * std::pow(t, law.beta);
}

enum class VarForm { beta_duplication, alternative };

inline double fpp_var(double t, const FppLaw& law, VarForm form = VarForm::beta_duplication) {
    law.validate();
    const double b = law.beta;
    const double qt = law.q() * std::pow(t, b);
    if (form == VarForm::beta_duplication)
        return qt * (1.0 + qt * (b * specfun::beta_fn(b, 0.5) / std::pow(2.0, 2.0 * b - 1.0) - 1.0));
    const double lt = law.lambda * std::pow(t, b);
    return qt + lt * lt * z_beta(b);
}

inline double fpp_cov(double s, double t, const FppLaw& law) {
    law.validate();
    if (s > t) throw argument_order_error("fpp_cov: requires s <= t");
    if (!(s > 0.0)) throw domain_error("fpp_cov: requires s > 0");
    const double b = law.beta, q = law.q();
    return q * std::pow(s, b) + law.d2() * std::pow(s, 2.0 * b) +
           q * q * (b * std::pow(t, 2.0 * b) * specfun::incomplete_beta(b, 1.0 + b, s / t) - std::pow(s * t, b));
}

// ---------------------------------------------------------------- FNBP

inline SeriesValue fnbp_pmf_series(int n, double t, const FnbpLaw& law, const SeriesControl& ctl = {}) {
    law.validate();
    if (n < 0) throw domain_error("fnbp_pmf: n must be nonnegative");
    if (!(t > 0.0)) throw domain_error("fnbp_pmf: requires t > 0");
    const double b = law.fpp.beta, lam = law.fpp.lambda, a = law.gamma.alpha;
    const double pt = law.gamma.shape(t);
    const double zr = lam / std::pow(a, b);
    if (!(zr < 1.0)) throw convergence_domain_error("fnbp_pmf: series requires lambda < alpha^beta");
    specfun::WrightParams w{{{n + 1.0, 1.0}, {n * b + pt, b}}, {{n * b + 1.0, b}}};
    SeriesValue s = specfun::gen_wright(w, -zr, ctl);
    using specfun::detail::lgam;
    double lpre = n * std::log(zr) - lgam(n + 1.0) - lgam(pt);
    double pre = std::exp(lpre);
    s.value *= pre;
    s.est_error *= pre;
    return s;
}

inline SeriesValue fnbp_pmf_quadrature(int n, double t, const FnbpLaw& law) {
    law.validate();
    if (!(t > 0.0)) throw domain_error("fnbp_pmf: requires t > 0");
    const double b = law.fpp.beta, lam = law.fpp.lambda;
    const double shape = law.gamma.shape(t), rate = law.gamma.alpha;
    SeriesValue out;
    out.path = EvalPath::quadrature;
    quad::QuadResult r;
    if (b == 1.0) {
        r = quad::gamma_expectation([&](double y) { return std::exp(log_poisson_pmf_mu(n, lam * y)); }, shape, rate);
    } else {
        auto inner = [&](double z) {
            return quad::gamma_expectation(
                       [&](double y) { return std::exp(log_poisson_pmf_mu(n, lam * z * std::pow(y, b))); }, shape, rate,
                       1e-10)
                .value;
        };
        r = detail::m_wright_expectation(b, inner, {}, 1e-10);
    }
    out.value = r.value;
    out.est_error = r.error;
    out.reliable = std::isfinite(r.value) && r.error <= 1e-7 * std::fabs(r.value) + 1e-300;
    return out;
}

inline SeriesValue fnbp_pmf(int n, double t, const FnbpLaw& law, const SeriesControl& ctl = {}) {
    law.validate();
    std::string diag;
    if (law.series_domain()) {
        try {
            SeriesValue s = fnbp_pmf_series(n, t, law, ctl);
            if (detail::accept(s)) return s;
            diag = "series unreliable (est_error " + std::to_string(s.est_error) + ")";
        } catch (const truncation_error& e) {
            diag = e.what();
        }
    } else {
        diag = "lambda >= alpha^beta";
    }
    if (law.fpp.beta == 1.0) {
        double lam = law.fpp.lambda, a = law.gamma.alpha;
        return {nb_pmf_eta(n, law.gamma.shape(t), lam / (a + lam), a / (a + lam)), 0.0, 0, true, EvalPath::closed_form};
    }
    SeriesValue q = fnbp_pmf_quadrature(n, t, law);
    if (q.reliable) return q;
    throw evaluation_error("fnbp_pmf: no reliable evaluation path", diag + "; quadrature error " + std::to_string(q.est_error));
}

inline double fnbp_mean(double t, const FnbpLaw& law) {
    law.validate();
    return law.fpp.q() * gamma_moment(t, law.gamma, law.fpp.beta);
}

inline double fnbp_var(double t, const FnbpLaw& law) {
    law.validate();
    const double b = law.fpp.beta, q = law.fpp.q();
    const double m1 = q * gamma_moment(t, law.gamma, b);
    return m1 * (1.0 - m1) + law.fpp.d1() * gamma_moment(t, law.gamma, 2.0 * b);
}

// E[B(beta, 1+beta; R)] with R = Gamma(s)/Gamma(t) ~ Beta(ps, p(t-s)).
inline double fnbp_beta_cross_expectation(double s, double t, const FnbpLaw& law) {
    const double b = law.fpp.beta;
    if (s == t) return specfun::beta_fn(b, 1.0 + b);
    const double a1 = law.gamma.shape(s), a2 = law.gamma.shape(t - s);
    // u = v^{1/beta} removes the u^{beta-1} endpoint singularity.
    const double ib = 1.0 / b;
    auto f = [&](double v) {
        double u = std::pow(v, ib);
        if (u >= 1.0) return 0.0;
        return std::pow(1.0 - u, b) * boost::math::ibetac(a1, a2, u) * ib;
    };
    const double mean = a1 / (a1 + a2);
    const double sd = std::sqrt(a1 * a2 / ((a1 + a2) * (a1 + a2) * (a1 + a2 + 1.0)));
    std::vector<double> pts{0.0, 1.0};
    for (double u : {0.1 * mean, 0.5 * mean, mean, mean + sd, mean + 3.0 * sd, mean + 8.0 * sd, mean + 20.0 * sd})
        if (u > 0.0 && u < 1.0) pts.push_back(std::pow(u, b));
    return quad::integrate_panels(f, pts, 1e-12).value;
}

inline double fnbp_cov(double s, double t, const FnbpLaw& law) {
    law.validate();
    if (s > t) throw argument_order_error("fnbp_cov: requires s <= t");
    if (!(s > 0.0)) throw domain_error("fnbp_cov: requires s > 0");
    const double b = law.fpp.beta, q = law.fpp.q();
    const double ms = gamma_moment(s, law.gamma, b);
    const double mt = gamma_moment(t, law.gamma, b);
    const double cross = gamma_moment(t, law.gamma, 2.0 * b) * fnbp_beta_cross_expectation(s, t, law);
    return q * ms + law.fpp.d2() * gamma_moment(s, law.gamma, 2.0 * b) - q * q * ms * mt + b * q * q * cross;
}

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

// Same covariance with the cross term estimated from independent gamma increments.
inline McEstimate fnbp_cov_monte_carlo(double s, double t, const FnbpLaw& law, std::size_t samples, RngStream& rng) {
    law.validate();
    if (s > t) throw argument_order_error("fnbp_cov: requires s <= t");
    const double b = law.fpp.beta, q = law.fpp.q();
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        double gs = rng::gamma(rng, law.gamma.shape(s), law.gamma.alpha);
        double gt = gs + (t > s ? rng::gamma(rng, law.gamma.shape(t - s), law.gamma.alpha) : 0.0);
        double x = std::pow(gt, 2.0 * b) * specfun::incomplete_beta(b, 1.0 + b, std::min(1.0, gs / gt));
        double d = x - mean;
        mean += d / (i + 1.0);
        m2 += d * (x - mean);
    }
    const double ms = gamma_moment(s, law.gamma, b);
    const double mt = gamma_moment(t, law.gamma, b);
    McEstimate out;
    out.samples = samples;
    double base = q * ms + law.fpp.d2() * gamma_moment(s, law.gamma, 2.0 * b) - q * q * ms * mt;
    out.value = base + b * q * q * mean;
    out.stderr_ = b * q * q * std::sqrt(m2 / (samples - 1.0) / samples);
    return out;
}

// ---------------------------------------------------------------- Polya and SFPP

inline double polya_pmf(int n, double t, const GammaLaw& g) {
    g.validate();
    if (n < 0) throw domain_error("polya_pmf: n must be nonnegative");
    if (!(t >= 0.0)) throw domain_error("polya_pmf: requires t >= 0");
    if (t == 0.0) return n == 0 ? 1.0 : 0.0;
    return nb_pmf_eta(n, g.p, t / (g.alpha + t), g.alpha / (g.alpha + t));
}

inline SeriesValue sfpp_pmf_series(int n, double t, const SfppLaw& law, const SeriesControl& ctl = {}) {
    law.validate();
    if (n < 0) throw domain_error("sfpp_pmf: n must be nonnegative");
    if (!(t >= 0.0)) throw domain_error("sfpp_pmf: requires t >= 0");
    if (t == 0.0) return {n == 0 ? 1.0 : 0.0, 0.0, 0, true, EvalPath::closed_form};
    const double b = law.beta, p = law.gamma.p;
    const double z = -t / std::pow(law.gamma.alpha, b);
    if (b == 1.0 && !(std::fabs(z) < 1.0))
        throw convergence_domain_error("sfpp_pmf: series at beta = 1 requires t < alpha");
    specfun::WrightParams w{{{1.0, b}, {p, b}}, {{1.0 - n, b}}};
    SeriesValue s = specfun::gen_wright(w, z, ctl);
    using specfun::detail::lgam;
    double pre = std::exp(-lgam(n + 1.0) - lgam(p));
    if (n & 1) pre = -pre;
    s.value *= pre;
    s.est_error *= std::fabs(pre);
    return s;
}

inline SeriesValue sfpp_pmf_quadrature(int n, double t, const SfppLaw& law) {
    law.validate();
    if (t == 0.0) return {n == 0 ? 1.0 : 0.0, 0.0, 0, true, EvalPath::closed_form};
    const double a = law.gamma.alpha, p = law.gamma.p, b = law.beta;
    SeriesValue out;
    if (b == 1.0) {
        out.value = polya_pmf(n, t, law.gamma);
        out.path = EvalPath::closed_form;
        return out;
    }
    // D_beta(t) = (t/Z)^{1/beta} with Z ~ M_beta; given D the count is NB(p, D/(alpha+D)).
    auto f = [&](double z) {
        double x = std::pow(t / z, 1.0 / b);
        return nb_pmf_eta(n, p, x / (a + x), a / (a + x));
    };
    auto r = detail::m_wright_expectation(b, f);
    out.value = r.value;
    out.est_error = r.error;
    out.path = EvalPath::quadrature;
    out.reliable = std::isfinite(r.value) && r.error <= 1e-8 * std::fabs(r.value) + 1e-300;
    return out;
}

inline SeriesValue sfpp_pmf(int n, double t, const SfppLaw& law, const SeriesControl& ctl = {}) {
    law.validate();
    std::string diag;
    const bool series_ok = law.beta < 1.0 || t < law.gamma.alpha;
    if (series_ok) {
        try {
            SeriesValue s = sfpp_pmf_series(n, t, law, ctl);
            if (detail::accept(s)) return s;
            diag = "series unreliable (est_error " + std::to_string(s.est_error) + ")";
        } catch (const truncation_error& e) {
            diag = e.what();
        }
    }
    if (law.beta == 1.0) return {polya_pmf(n, t, law.gamma), 0.0, 0, true, EvalPath::closed_form};
    SeriesValue q = sfpp_pmf_quadrature(n, t, law);
    if (q.reliable) return q;
    throw evaluation_error("sfpp_pmf: no reliable evaluation path", diag + "; quadrature error " + std::to_string(q.est_error));
}

// P(X > m) for the SFPP, by mixing the NB tail over the stable subordinator.
inline double sfpp_tail(int m, double t, const SfppLaw& law) {
    const double a = law.gamma.alpha, p = law.gamma.p, b = law.beta;
    if (b == 1.0) return nb_tail(m, p, t / (a + t), a / (a + t));
    auto f = [&](double z) {
        double x = std::pow(t / z, 1.0 / b);
        return nb_tail(m, p, x / (a + x), a / (a + x));
    };
    return detail::m_wright_expectation(b, f).value;
}

// E[u^X] = int exp(-lambda^beta t (1-u)^beta) g(lambda | alpha, p) d lambda
inline double sfpp_pgf(double u, double t, const SfppLaw& law) {
    law.validate();
    if (!(u >= 0.0 && u <= 1.0)) throw domain_error("sfpp_pgf: requires u in [0,1]");
    if (u == 1.0 || t == 0.0) return 1.0;
    const double c = t * std::pow(1.0 - u, law.beta);
    const double b = law.beta, p = law.gamma.p, a = law.gamma.alpha;
    auto f = [&](double lam) { return std::exp(-std::pow(lam, b) * c + quad::log_gamma_density(lam, p, a)); };
    // geometric breakpoints resolve the lambda^beta cusp at the origin
    std::vector<double> pts{0.0, p / a, (p + 4.0 * std::sqrt(p) + 1.0) / a, (p + 12.0 * std::sqrt(p) + 20.0) / a, quad::inf};
    for (double e = 1e-14; e < 1.0; e *= 100.0) pts.push_back(e * p / a);
    return quad::integrate_panels(f, pts, 1e-14).value;
}

// ---------------------------------------------------------------- Laplace transforms

// E[exp(-s Gamma(E_beta(t)))] = L_beta(t^beta p log(alpha/(alpha+s)))
inline double lt_gamma_of_inverse(double s, double t, const GammaLaw& g, double beta) {
    g.validate();
    if (!(s >= 0.0)) throw domain_error("lt_gamma_of_inverse: requires s >= 0");
    if (s == 0.0) return 1.0;
    double z = std::pow(t, beta) * g.p * std::log(g.alpha / (g.alpha + s));
    return specfun::mittag_leffler(beta, z).value;
}

// E[exp(-s E_beta(Gamma(t)))] = 2psi1[-s/alpha^beta | (pt,beta),(1,1); (1,beta)] / Gamma(pt)
inline double lt_inverse_of_gamma(double s, double t, const GammaLaw& g, double beta) {
    g.validate();
    if (!(s >= 0.0)) throw domain_error("lt_inverse_of_gamma: requires s >= 0");
    if (s == 0.0) return 1.0;
    const double z = s / std::pow(g.alpha, beta);
    if (!(z < 1.0)) throw convergence_domain_error("lt_inverse_of_gamma: requires s < alpha^beta");
    const double pt = g.shape(t);
    specfun::WrightParams w{{{pt, beta}, {1.0, 1.0}}, {{1.0, beta}}};
    return specfun::gen_wright(w, -z).value * std::exp(-specfun::detail::lgam(pt));
}

inline double lt_fnbp(double s, double t, const FnbpLaw& law) {
    law.validate();
    if (!(s >= 0.0)) throw domain_error("lt_fnbp: requires s >= 0");
    const double a = law.gamma.alpha, b = law.fpp.beta;
    const double w = law.fpp.lambda * (-std::expm1(-s));
    if (!(w < std::pow(a, b))) throw convergence_domain_error("lt_fnbp: requires lambda (1 - e^{-s}) < alpha^beta");
    if (w == 0.0) return 1.0;
    const double pt = law.gamma.shape(t);
    specfun::WrightParams wp{{{pt, b}, {1.0, 1.0}}, {{1.0, b}}};
    return specfun::gen_wright(wp, -w / std::pow(a, b)).value * std::exp(-specfun::detail::lgam(pt));
}

// ---------------------------------------------------------------- tables

namespace detail {

inline double fpp_tail(int m, double t, const FppLaw& law) {
    const double x = law.lambda * std::pow(t, law.beta);
    if (law.beta == 1.0) return boost::math::gamma_p(m + 1.0, x);
    return m_wright_expectation(law.beta, [&](double z) { return x * z > 0.0 ? boost::math::gamma_p(m + 1.0, x * z) : 0.0; },
                                {(m + 1.0) / x})
        .value;
}

inline double fnbp_tail(int m, double t, const FnbpLaw& law) {
    const double b = law.fpp.beta, lam = law.fpp.lambda;
    const double shape = law.gamma.shape(t), rate = law.gamma.alpha;
    if (b == 1.0) return nb_tail(m, shape, lam / (rate + lam), rate / (rate + lam));
    auto inner = [&](double z) {
        return quad::gamma_expectation(
                   [&](double y) {
                       double mu = lam * z * std::pow(y, b);
                       return mu > 0.0 ? boost::math::gamma_p(m + 1.0, mu) : 0.0;
                   },
                   shape, rate, 1e-10)
            .value;
    };
    return m_wright_expectation(b, inner, {}, 1e-10).value;
}

template <class F>
void fill_table(PmfTable& tab, int n_max, F&& f) {
    if (n_max < 0) throw domain_error("pmf table: n_max must be nonnegative");
    tab.prob.resize(n_max + 1);
    tab.est_error.resize(n_max + 1);
    tab.paths.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        SeriesValue v = f(n);
        tab.prob[n] = std::max(0.0, v.value);
        tab.est_error[n] = v.est_error;
        tab.paths[n] = v.path;
    }
}

}  // namespace detail

inline PmfTable poisson_table(double t, double lambda, int n_max) {
    PmfTable tab{"poisson", {{"lambda", lambda}}, t};
    detail::fill_table(tab, n_max, [&](int n) { return SeriesValue{poisson_pmf(n, t, lambda), 0.0, 0, true, EvalPath::closed_form}; });
    tab.tail_mass = boost::math::gamma_p(n_max + 1.0, lambda * t);
    tab.tail_bound = std::min(1.0, lambda * t / (n_max + 1.0));
    tab.tolerance = 1e-12;
    return tab;
}

inline PmfTable nb_table(double shape, double eta, int n_max) {
    PmfTable tab{"nb", {{"shape", shape}, {"eta", eta}}, 0.0};
    detail::fill_table(tab, n_max, [&](int n) { return SeriesValue{nb_pmf(n, shape, eta), 0.0, 0, true, EvalPath::closed_form}; });
    tab.tail_mass = nb_tail(n_max, shape, eta, 1.0 - eta);
    tab.tail_bound = std::min(1.0, shape * eta / (1.0 - eta) / (n_max + 1.0));
    tab.tolerance = 1e-12;
    return tab;
}

inline PmfTable fpp_table(double t, const FppLaw& law, int n_max, const SeriesControl& ctl = {}) {
    PmfTable tab{"fpp", {{"beta", law.beta}, {"lambda", law.lambda}}, t};
    detail::fill_table(tab, n_max, [&](int n) { return fpp_pmf(n, t, law, ctl); });
    tab.tail_mass = detail::fpp_tail(n_max, t, law);
    tab.tail_bound = std::min(1.0, fpp_mean(t, law) / (n_max + 1.0));
    tab.tolerance = 1e-8;
    return tab;
}

inline PmfTable fnbp_table(double t, const FnbpLaw& law, int n_max, const SeriesControl& ctl = {}) {
    PmfTable tab{"fnbp",
                 {{"beta", law.fpp.beta}, {"lambda", law.fpp.lambda}, {"alpha", law.gamma.alpha}, {"p", law.gamma.p}},
                 t};
    detail::fill_table(tab, n_max, [&](int n) { return fnbp_pmf(n, t, law, ctl); });
    tab.tail_mass = detail::fnbp_tail(n_max, t, law);
    tab.tail_bound = std::min(1.0, fnbp_mean(t, law) / (n_max + 1.0));
    tab.tolerance = 1e-7;
    return tab;
}

inline PmfTable polya_table(double t, const GammaLaw& g, int n_max) {
    PmfTable tab{"polya", {{"alpha", g.alpha}, {"p", g.p}}, t};
    detail::fill_table(tab, n_max, [&](int n) { return SeriesValue{polya_pmf(n, t, g), 0.0, 0, true, EvalPath::closed_form}; });
    tab.tail_mass = nb_tail(n_max, g.p, t / (g.alpha + t), g.alpha / (g.alpha + t));
    tab.tail_bound = std::min(1.0, g.p * t / g.alpha / (n_max + 1.0));
    tab.tolerance = 1e-12;
    return tab;
}

inline PmfTable sfpp_table(double t, const SfppLaw& law, int n_max, const SeriesControl& ctl = {}) {
    PmfTable tab{"sfpp", {{"beta", law.beta}, {"alpha", law.gamma.alpha}, {"p", law.gamma.p}}, t};
    detail::fill_table(tab, n_max, [&](int n) { return sfpp_pmf(n, t, law, ctl); });
    tab.tail_mass = sfpp_tail(n_max, t, law);
    // infinite mean: the only available bound is the remainder of the partial sums
    tab.tail_bound = std::max(0.0, 1.0 - tab.entries_sum());
    tab.tolerance = 1e-6;
    return tab;
}

inline PmfTable process_table(const ProcessLaw& law, double t, int n_max, const SeriesControl& ctl = {}) {
    switch (law.kind) {
        case ProcessKind::poisson: return poisson_table(t, law.lambda, n_max);
        case ProcessKind::fpp: return fpp_table(t, law.fpp(), n_max, ctl);
        case ProcessKind::fnbp: return fnbp_table(t, law.fnbp(), n_max, ctl);
        case ProcessKind::polya: return polya_table(t, law.gamma, n_max);
        case ProcessKind::sfpp: return sfpp_table(t, law.sfpp(), n_max, ctl);
    }
    throw domain_error("process_table: unknown process");
}

}  // namespace fracnb::dist

#endif
