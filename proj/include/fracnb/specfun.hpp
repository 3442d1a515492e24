#ifndef FRACNB_SPECFUN_HPP
#define FRACNB_SPECFUN_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "errors.hpp"
#include "quadrature.hpp"
#include "series.hpp"

namespace fracnb::specfun {

struct LogGamma {
    double log_abs;
    int sign;
};

namespace detail {

// Nonpositive integers, allowing for representation error from products like beta*k.
inline bool is_pole(double x) {
    if (x > 0.5) return false;
    double r = std::round(x);
    return std::fabs(x - r) <= 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x));
}

inline double lgam(double x) {
    int s;
    return ::lgamma_r(x, &s);
}

inline LogGamma lgamma_signed_unchecked(double x) {
    int s = 1;
    double l = ::lgamma_r(x, &s);
    return {l, s};
}

// log|1/Gamma(x)| with sign; sign 0 at poles.
inline LogTerm log_rgamma(double x) {
    if (is_pole(x)) return {};
    LogGamma g = lgamma_signed_unchecked(x);
    return {-g.log_abs, g.sign};
}

}  // namespace detail

inline LogGamma log_gamma_signed(double x) {
    if (!std::isfinite(x)) throw domain_error("log_gamma_signed: non-finite argument");
    if (x <= 0.0 && x == std::floor(x)) throw domain_error("log_gamma_signed: pole at nonpositive integer");
    int s = 1;
    double l = boost::math::lgamma(x, &s);
    return {l, s};
}

inline double digamma(double x) {
    if (!(x > 0.0)) throw domain_error("digamma: requires x > 0");
    return boost::math::digamma(x);
}

// Non-normalized incomplete beta: integral of t^{a-1}(1-t)^{b-1} over [0,x].
inline double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw domain_error("incomplete_beta: requires a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw domain_error("incomplete_beta: requires x in [0,1]");
    if (x == 0.0) return 0.0;
    return boost::math::beta(a, b, x);
}

inline double beta_fn(double a, double b) { return boost::math::beta(a, b); }

// Gamma(beta+1) / (Gamma(r+1) Gamma(beta-r+1)).
inline double binom_general(double beta, int r) {
    if (r < 0) throw domain_error("binom_general: r must be nonnegative");
    if (r == 0) return 1.0;
    bool beta_int = beta == std::floor(beta);
    if (beta_int && beta >= 0.0 && r > beta) return 0.0;
    if (beta_int && beta < 0.0) {
        double c = 1.0;
        for (int i = 0; i < r; ++i) c *= (beta - i) / (i + 1);
        return c;
    }
    LogGamma num = detail::lgamma_signed_unchecked(beta + 1.0);
    LogTerm den = detail::log_rgamma(beta - r + 1.0);
    if (den.sign == 0) return 0.0;
    double l = num.log_abs + den.log_abs - detail::lgam(r + 1.0);
    return num.sign * den.sign * std::exp(l);
}

// ---------------------------------------------------------------- Mittag-Leffler

inline SeriesValue mittag_leffler_series(double beta, double z, const SeriesControl& ctl = {}) {
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("mittag_leffler: requires beta in (0,1]");
    if (z == 0.0) return {1.0, 0.0, 1, true, EvalPath::series};
    const double lz = std::log(std::fabs(z));
    const bool neg = z < 0.0;
    auto term = [&](int k) {
        return LogTerm{k * lz - detail::lgam(1.0 + beta * k), (neg && (k & 1)) ? -1 : 1};
    };
    return sum_log_series(term, ctl, "mittag_leffler");
}

// L_beta(-x), x >= 0, from its integral representation.
inline SeriesValue mittag_leffler_negative_integral(double beta, double x, double rel_tol = 1e-13) {
    using std::numbers::pi;
    if (x == 0.0) return {1.0, 0.0, 0, true, EvalPath::quadrature};
    const double cb = std::cos(beta * pi);
    const double ib = 1.0 / beta;
    auto f = [&](double w) {
        double den = w * w + 2.0 * w * cb + 1.0;
        return std::exp(-std::pow(w * x, ib)) / den;
    };
    quad::QuadResult r = quad::integrate_panels(f, {0.0, std::min(1.0, 1.0 / x), std::max(1.0, 1.0 / x), quad::inf},
                                                rel_tol);
    const double c = std::sin(beta * pi) / (pi * beta);
    SeriesValue out;
    out.value = c * r.value;
    out.est_error = c * r.error;
    out.reliable = std::isfinite(out.value) && r.error <= 1e-8 * std::fabs(r.value) + 1e-300;
    out.path = EvalPath::quadrature;
    return out;
}

// Series, with the integral representation taking over for negative arguments where the series cancels.
inline SeriesValue mittag_leffler(double beta, double z, const SeriesControl& ctl = {}) {
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("mittag_leffler: requires beta in (0,1]");
    if (beta == 1.0) return {std::exp(z), std::exp(z) * 1e-16, 0, true, EvalPath::closed_form};
    if (z < 0.0 && std::pow(-z, 1.0 / beta) > 4.0) return mittag_leffler_negative_integral(beta, -z);
    try {
        SeriesValue s = mittag_leffler_series(beta, z, ctl);
        if (z >= 0.0 || (s.reliable && s.est_error <= 1e-12 * std::fabs(s.value))) return s;
    } catch (const truncation_error&) {
        if (z >= 0.0) throw;
    }
    return mittag_leffler_negative_integral(beta, -z);
}

// ---------------------------------------------------------------- M-Wright

// (1/pi) sum_{n>=1} (-z)^{n-1}/(n-1)! Gamma(beta n) sin(pi beta n)
inline SeriesValue m_wright_series(double beta, double z, const SeriesControl& ctl = {}) {
    if (!(beta > 0.0 && beta < 1.0)) throw domain_error("m_wright: requires 0 < beta < 1");
    if (z < 0.0) throw domain_error("m_wright: requires z >= 0");
    const double lz = z > 0.0 ? std::log(z) : 0.0;
    const double lpi = std::log(std::numbers::pi);
    auto term = [&](int k) -> LogTerm {
        int n = k + 1;
        if (z == 0.0 && k > 0) return {};
        double s = boost::math::sin_pi(beta * n);
        if (s == 0.0) return {};
        double l = k * lz - detail::lgam(n) + detail::lgam(beta * n) + std::log(std::fabs(s)) - lpi;
        int sg = (s > 0 ? 1 : -1) * ((k & 1) ? -1 : 1);
        return {l, sg};
    };
    if (z == 0.0) {
        SeriesValue v;
        v.value = 1.0 / std::tgamma(1.0 - beta);
        v.est_error = 1e-16 * v.value;
        v.terms_used = 1;
        return v;
    }
    return sum_log_series(term, ctl, "m_wright");
}

// Zolotarev/Kanter integral: M(z) = z^{b/(1-b)}/(pi(1-b)) int_0^pi A(u) exp(-A(u) z^{1/(1-b)}) du.
inline SeriesValue m_wright_integral(double beta, double z, double rel_tol = 1e-12) {
    using std::numbers::pi;
    if (!(beta > 0.0 && beta < 1.0)) throw domain_error("m_wright: requires 0 < beta < 1");
    if (!(z > 0.0)) throw domain_error("m_wright_integral: requires z > 0");
    const double c = 1.0 - beta;
    const double e1 = beta / c;
    const double e2 = 1.0 / c;
    const double Z = std::pow(z, e2);
    const double lpref = e1 * std::log(z) - std::log(pi * c);
    const double la0 = e1 * std::log(beta) + std::log(c);
    auto lsinc = [](double x) {
        if (x >= 1.0) return std::log(std::sin(x) / x);
        // (sin x - x)/x by its Taylor series keeps full relative accuracy near 0
        double x2 = x * x, term = -x2 / 6.0, sum = term;
        for (int k = 2; std::fabs(term) > 1e-17 * std::fabs(sum); ++k) {
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        return std::log1p(sum);
    };
    // the exponent is largest at u = 0; integrate relative to it so deep tails do not underflow
    const double g0 = la0 - Z * std::exp(la0);
    const double za0 = Z * std::exp(la0);
    auto f = [&](double u) {
        double d = e1 * lsinc(beta * u) + lsinc(c * u) - e2 * lsinc(u);
        if (!(la0 + d < 700.0)) return 0.0;
        return std::exp(d - za0 * std::expm1(d));
    };
    double w = std::min(pi, 4.0 / std::sqrt(Z));
    quad::QuadResult r = quad::integrate_panels(f, {0.0, 0.25 * w, w, pi}, rel_tol);
    const double scale = std::exp(g0 + lpref);
    SeriesValue out;
    out.value = r.value * scale;
    out.est_error = r.error * scale;
    out.path = EvalPath::quadrature;
    out.reliable = std::isfinite(r.value) && r.error <= 1e-8 * std::fabs(r.value) + 1e-300;
    return out;
}

inline SeriesValue m_wright(double beta, double z, const SeriesControl& ctl = {}) {
    if (!(beta > 0.0 && beta < 1.0)) throw domain_error("m_wright: requires 0 < beta < 1");
    if (z < 0.0) throw domain_error("m_wright: requires z >= 0");
    if (z > 0.0 && std::pow(z, 1.0 / (1.0 - beta)) > 10.0) return m_wright_integral(beta, z);
    try {
        SeriesValue s = m_wright_series(beta, z, ctl);
        if (s.reliable && s.est_error <= 1e-10 * std::fabs(s.value)) return s;
    } catch (const truncation_error&) {
    }
    return m_wright_integral(beta, z);
}

// Point beyond which M_beta(z) < e^{-log_eps} from the leading asymptotic term.
inline double m_wright_cutoff(double beta, double log_eps = 700.0) {
    double c = (1.0 - beta) * std::pow(beta, beta / (1.0 - beta));
    return std::pow(log_eps / c, 1.0 - beta);
}

// Plain double value of M_beta(z), used as a quadrature kernel.
inline double m_wright_value(double beta, double z) {
    static const SeriesControl ctl{1e-16, 0.0, 4000, 1e4, false};
    if (z > m_wright_cutoff(beta, 760.0)) return 0.0;
    return m_wright(beta, z, ctl).value;
}

// ---------------------------------------------------------------- generalized Wright

struct WrightParams {
    std::vector<std::pair<double, double>> upper;  // (a_i, alpha_i)
    std::vector<std::pair<double, double>> lower;  // (b_j, beta_j)

    double delta_exponent() const {
        double d = 0.0;
        for (auto& [b, bj] : lower) d += bj;
        for (auto& [a, ai] : upper) d -= ai;
        return d;
    }
    double radius() const {
        double l = 0.0;
        for (auto& [a, ai] : upper) l -= ai * std::log(std::fabs(ai));
        for (auto& [b, bj] : lower) l += bj * std::log(std::fabs(bj));
        return std::exp(l);
    }
};

inline SeriesValue gen_wright(const WrightParams& params, double z, const SeriesControl& ctl = {}) {
    if (params.upper.empty() || params.lower.empty()) throw domain_error("gen_wright: requires p >= 1 and q >= 1");
    for (auto& [a, ai] : params.upper)
        if (!(ai > 0.0)) throw domain_error("gen_wright: upper scale parameters must be positive");
    for (auto& [b, bj] : params.lower)
        if (!(bj > 0.0)) throw domain_error("gen_wright: lower scale parameters must be positive");
    const double D = params.delta_exponent();
    if (D < -1.0 - 1e-12) throw unsupported_domain_error("gen_wright: classification exponent below -1");
    if (std::fabs(D + 1.0) <= 1e-12) {
        double r = params.radius();
        if (std::fabs(z) >= r)
            throw convergence_domain_error("gen_wright: requires |z| < " + std::to_string(r) + " when Delta = -1");
    }
    if (z == 0.0) {
        double l = 0.0;
        int s = 1;
        for (auto& [a, ai] : params.upper) {
            if (detail::is_pole(a)) throw domain_error("gen_wright: pole in upper gamma factor");
            LogGamma g = detail::lgamma_signed_unchecked(a);
            l += g.log_abs;
            s *= g.sign;
        }
        for (auto& [b, bj] : params.lower) {
            LogTerm r = detail::log_rgamma(b);
            if (r.sign == 0) return {0.0, 0.0, 1, true, EvalPath::series};
            l += r.log_abs;
            s *= r.sign;
        }
        return {s * std::exp(l), 0.0, 1, true, EvalPath::series};
    }
    const double lz = std::log(std::fabs(z));
    const bool neg = z < 0.0;
    auto term = [&](int k) -> LogTerm {
        double l = k * lz - detail::lgam(k + 1.0);
        int s = (neg && (k & 1)) ? -1 : 1;
        for (auto& [b, bj] : params.lower) {
            LogTerm r = detail::log_rgamma(b + bj * k);
            if (r.sign == 0) return {};
            l += r.log_abs;
            s *= r.sign;
        }
        for (auto& [a, ai] : params.upper) {
            double x = a + ai * k;
            if (detail::is_pole(x)) throw domain_error("gen_wright: pole in upper gamma factor");
            LogGamma g = detail::lgamma_signed_unchecked(x);
            l += g.log_abs;
            s *= g.sign;
        }
        return {l, s};
    };
    return sum_log_series(term, ctl, "gen_wright");
}

// sum_k Gamma(n+1+m+k) Gamma(n b + pt + b(m+k)) / Gamma(n b + 1 + b(m+k)) (-1)^k z^{m+k} / k!
inline SeriesValue h22_series(int n, double beta, double pt_shape, int m, double z, const SeriesControl& ctl = {}) {
    if (n < 0 || m < 0) throw domain_error("h22_series: n and m must be nonnegative");
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("h22_series: requires beta in (0,1]");
    if (!(pt_shape > 0.0)) throw domain_error("h22_series: requires positive shape");
    if (!(std::fabs(z) < 1.0)) throw convergence_domain_error("h22_series: requires |z| < 1");
    if (z == 0.0 && m > 0) return {0.0, 0.0, 1, true, EvalPath::series};
    const double lz = z != 0.0 ? std::log(std::fabs(z)) : 0.0;
    const double nb = n * beta;
    auto term = [&](int k) -> LogTerm {
        if (z == 0.0 && k > 0) return {};
        int j = m + k;
        double l = detail::lgam(n + 1.0 + j) + detail::lgam(nb + pt_shape + beta * j) - detail::lgam(nb + 1.0 + beta * j) -
                   detail::lgam(k + 1.0) + j * lz;
        int s = (k & 1) ? -1 : 1;
        if (z < 0.0 && (j & 1)) s = -s;
        return {l, s};
    };
    return sum_log_series(term, ctl, "h22_series");
}

}  // namespace fracnb::specfun

#endif
