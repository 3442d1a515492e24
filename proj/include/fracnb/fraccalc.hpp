#ifndef FRACNB_FRACCALC_HPP
#define FRACNB_FRACCALC_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "dist.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace fracnb::fraccalc {

struct MeshSpec {
    int nodes = 256;
    double grading = 0.0;  // 0 selects max(1, 2/(m - nu))

    void validate() const {
        if (nodes < 16) throw domain_error("MeshSpec: nodes must be >= 16");
        if (!(grading == 0.0 || grading >= 1.0)) throw domain_error("MeshSpec: grading must be 0 (auto) or >= 1");
    }
    double exponent(double order_gap) const { return grading > 0.0 ? grading : std::max(1.0, 2.0 / order_gap); }
    MeshSpec refined(int factor) const { return {nodes * factor, grading}; }
};

struct ResidualReport {
    std::string equation;
    std::vector<std::pair<std::string, double>> point;
    std::vector<int> meshes;         // node counts, empty for closed-form checks
    std::vector<double> residuals;   // absolute residual per mesh
    std::vector<double> scales;      // largest term magnitude per mesh
    std::vector<double> ratios;      // residual[i+1] / residual[i]

    double residual() const { return residuals.empty() ? NAN : residuals.back(); }
    double relative() const { return residuals.empty() ? NAN : residuals.back() / std::max(scales.back(), 1e-300); }
    // Strict decrease across refinements; residuals already at the rounding floor count as converged.
    bool decays(double floor_rel = 1e-12) const {
        for (std::size_t i = 1; i < residuals.size(); ++i) {
            if (residuals[i] <= floor_rel * scales[i]) continue;
            if (!(residuals[i] < residuals[i - 1])) return false;
        }
        return true;
    }
    bool pass(double tol = 1e-4) const { return relative() < tol && decays(); }
};

using Fn = std::function<double(double)>;

namespace detail {

inline double checked(const Fn& f, double s) {
    double v = f(s);
    if (!std::isfinite(v)) throw evaluation_error("fraccalc: non-finite function value", "at s = " + std::to_string(s));
    return v;
}

// Nodes on [0, t]: exponent r0 toward s = 0 on the first half, r1 toward s = t on the second.
inline std::vector<double> graded_nodes(double t, int n, double r0, double r1) {
    std::vector<double> s(n + 1);
    for (int j = 0; j <= n; ++j) {
        double u = double(j) / n;
        double phi = u <= 0.5 ? 0.5 * std::pow(2.0 * u, r0) : 1.0 - 0.5 * std::pow(2.0 - 2.0 * u, r1);
        s[j] = t * phi;
    }
    s[0] = 0.0;
    s[n] = t;
    return s;
}

// (da^g - db^g) for da > db >= 0 without cancellation.
inline double power_diff(double da, double db, double g) {
    if (db <= 0.0) return std::pow(da, g);
    return std::pow(db, g) * std::expm1(g * std::log1p((da - db) / db));
}

inline double stencil1(const Fn& f, double t, double h) {
    return (-checked(f, t + 2 * h) + 8 * checked(f, t + h) - 8 * checked(f, t - h) + checked(f, t - 2 * h)) / (12 * h);
}

inline double stencil2(const Fn& f, double t, double h) {
    return (-checked(f, t + 2 * h) + 16 * checked(f, t + h) - 30 * checked(f, t) + 16 * checked(f, t - h) -
            checked(f, t - 2 * h)) /
           (12 * h * h);
}

inline double derivative(const Fn& f, double t, int m, double h) {
    return m == 1 ? stencil1(f, t, h) : stencil2(f, t, h);
}

inline double default_step(double t) { return 1e-3 * std::max(t, 1e-3); }

}  // namespace detail

struct Functional {
    std::vector<double> nodes;
    std::vector<double> weights;

    double apply(const Fn& f) const {
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            if (weights[j] != 0.0) sum += weights[j] * detail::checked(f, nodes[j]);
        return sum;
    }
};

namespace detail {

// Product trapezoid weights for I^a on [0, t], scaled by c.
inline void integral_weights(Functional& out, double a, double t, const MeshSpec& mesh, double c) {
    const auto s = graded_nodes(t, mesh.nodes, mesh.exponent(a), mesh.exponent(a));
    std::vector<double> w(s.size(), 0.0);
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        const double h = s[j + 1] - s[j];
        if (h <= 0.0) continue;
        const double da = t - s[j], db = t - s[j + 1];
        const double k0 = power_diff(da, db, a) / a;
        const double k1 = da * k0 - power_diff(da, db, a + 1.0) / (a + 1.0);
        w[j] += k0 - k1 / h;
        w[j + 1] += k1 / h;
    }
    const double scale = c / boost::math::tgamma(a);
    for (std::size_t j = 0; j < s.size(); ++j) {
        out.nodes.push_back(s[j]);
        out.weights.push_back(w[j] * scale);
    }
}

inline void stencil_weights(double t, int m, double h, const std::function<void(double, double)>& add) {
    static const double c1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
    static const double c2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
    const double* c = m == 1 ? c1 : c2;
    const double denom = m == 1 ? 12.0 * h : 12.0 * h * h;
    for (int k = 0; k < 5; ++k)
        if (c[k] != 0.0) add(t + (k - 2) * h, c[k] / denom);
}

}  // namespace detail

inline Functional frac_integral_functional(double a, double t, const MeshSpec& mesh) {
    mesh.validate();
    if (!(a > 0.0)) throw domain_error("frac_integral: requires order > 0");
    if (!(t > 0.0)) throw domain_error("frac_integral: requires t > 0");
    Functional out;
    detail::integral_weights(out, a, t, mesh, 1.0);
    return out;
}

// Riemann-Liouville integral of order a > 0 by product trapezoid on a graded mesh.
inline double frac_integral(const Fn& f, double a, double t, const MeshSpec& mesh) {
    return frac_integral_functional(a, t, mesh).apply(f);
}

// Caputo derivative of order nu in (0,1] by the L1 product rule on a graded mesh; nu = 1 is f'(t).
// Grading toward s = t is capped at 2 so difference quotients stay above rounding.
inline double caputo_deriv(const Fn& f, double nu, double t, const MeshSpec& mesh) {
    mesh.validate();
    if (!(nu > 0.0 && nu <= 1.0)) throw domain_error("caputo_deriv: requires nu in (0,1]");
    if (!(t > 0.0)) throw domain_error("caputo_deriv: requires t > 0");
    if (nu == 1.0) return detail::stencil1(f, t, std::min(detail::default_step(t), t / 4));
    const double r = mesh.exponent(1.0 - nu);
    const auto s = detail::graded_nodes(t, mesh.nodes, r, std::min(r, 2.0));
    const double g = 1.0 - nu;
    double prev = detail::checked(f, s[0]);
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        const double next = detail::checked(f, s[j + 1]);
        const double h = s[j + 1] - s[j];
        if (h > 0.0) sum += (next - prev) / h * detail::power_diff(t - s[j], t - s[j + 1], g);
        prev = next;
    }
    return sum / boost::math::tgamma(2.0 - nu);
}

// Riemann-Liouville derivative of order nu in (0,2) as nodes and weights: d^m/dt^m of I^{m-nu} with 5-point outer stencils.
inline Functional rl_functional(double nu, double t, const MeshSpec& mesh, double step_rel = 0.01) {
    mesh.validate();
    if (!(nu > 0.0 && nu < 2.0)) throw domain_error("rl_deriv: requires nu in (0,2)");
    if (!(t > 0.0)) throw domain_error("rl_deriv: requires t > 0");
    Functional out;
    if (nu == 1.0) {
        detail::stencil_weights(t, 1, std::min(detail::default_step(t), t / 4), [&](double x, double c) {
            out.nodes.push_back(x);
            out.weights.push_back(c);
        });
        return out;
    }
    const int m = nu < 1.0 ? 1 : 2;
    const double a = m - nu;
    const MeshSpec ms{mesh.nodes, mesh.grading > 0.0 ? mesh.grading : std::max(1.0, 2.0 / a)};
    detail::stencil_weights(t, m, step_rel * t,
                            [&](double tau, double c) { detail::integral_weights(out, a, tau, ms, c); });
    return out;
}

inline double rl_deriv(const Fn& f, double nu, double t, const MeshSpec& mesh, double step_rel = 0.01) {
    return rl_functional(nu, t, mesh, step_rel).apply(f);
}

// sum_{r=0}^{n} (-1)^r C(beta, r) seq(n - r); the sequence vanishes at negative indices.
template <class Seq>
double frac_shift_apply(double beta, Seq&& seq, int n) {
    if (n < 0) return 0.0;
    double s = 0.0;
    for (int r = 0; r <= n; ++r) {
        double c = specfun::binom_general(beta, r);
        if (c == 0.0) continue;
        s += ((r & 1) ? -c : c) * seq(n - r);
    }
    return s;
}

namespace detail {

inline void finish(ResidualReport& rep) {
    rep.ratios.clear();
    for (std::size_t i = 1; i < rep.residuals.size(); ++i)
        rep.ratios.push_back(rep.residuals[i - 1] > 0.0 ? rep.residuals[i] / rep.residuals[i - 1] : 0.0);
}

template <class Eval>
ResidualReport refine(std::string tag, std::vector<std::pair<std::string, double>> point, const MeshSpec& mesh,
                      int refinements, Eval&& eval) {
    ResidualReport rep;
    rep.equation = std::move(tag);
    rep.point = std::move(point);
    for (int i = 0; i <= refinements; ++i) {
        MeshSpec m = mesh.refined(1 << i);
        auto [res, scale] = eval(m);
        rep.meshes.push_back(m.nodes);
        rep.residuals.push_back(res);
        rep.scales.push_back(scale);
    }
    finish(rep);
    return rep;
}

inline ResidualReport single(std::string tag, std::vector<std::pair<std::string, double>> point, double res, double scale) {
    ResidualReport rep;
    rep.equation = std::move(tag);
    rep.point = std::move(point);
    rep.residuals.push_back(res);
    rep.scales.push_back(scale);
    return rep;
}

inline double max_abs(std::initializer_list<double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

inline double fpp_value(int n, double s, const dist::FppLaw& law) {
    if (n < 0) return 0.0;
    return dist::fpp_pmf(n, s, law).value;
}

inline double fnbp_value(int n, double t, const dist::FnbpLaw& law) {
    if (n < 0) return 0.0;
    if (t <= 0.0) return n == 0 ? 1.0 : 0.0;
    return dist::fnbp_pmf(n, t, law).value;
}

inline double sfpp_value(int n, double t, double alpha, double p, double beta) {
    if (n < 0) return 0.0;
    return dist::sfpp_pmf(n, t, dist::SfppLaw{beta, {alpha, p}}).value;
}

// k-th t-derivative of the SFPP pmf by term-wise differentiation of its Wright series.
inline double sfpp_time_derivative(int n, double t, const dist::SfppLaw& law, int k) {
    const double a = law.gamma.alpha, p = law.gamma.p, b = law.beta;
    if (b == 1.0) {
        double e = dist::polya_pmf(n, t, law.gamma);
        double d1 = n / t - (n + p) / (a + t);
        if (k == 1) return e * d1;
        if (k == 2) return e * (d1 * d1 - n / (t * t) + (n + p) / ((a + t) * (a + t)));
        throw domain_error("sfpp time derivative: beta = 1 supports k <= 2");
    }
    specfun::WrightParams w{{{1.0 + k * b, b}, {p + k * b, b}}, {{1.0 - n + k * b, b}}};
    SeriesValue s = specfun::gen_wright(w, -t / std::pow(a, b));
    using specfun::detail::lgam;
    double pre = std::exp(-lgam(n + 1.0) - lgam(p) - k * b * std::log(a));
    if ((n + k) & 1) pre = -pre;
    return pre * s.value;
}

// psi(x) g(y | alpha, x) with its limit -exp(-alpha y)/y at x = 0.
inline double psi_gamma_density(double y, double shape, double alpha) {
    if (shape <= 0.0) return -std::exp(-alpha * y) / y;
    return specfun::digamma(shape) * quad::gamma_density(y, shape, alpha);
}

}  // namespace detail

// Caputo form of the FPP forward equation: D^beta p(n) + lambda (p(n) - p(n-1)) = 0.
inline ResidualReport residual_fpp_equation(int n, double t, const dist::FppLaw& law, const MeshSpec& mesh = {},
                                            int refinements = 2) {
    law.validate();
    if (n < 0) throw domain_error("residual_fpp_equation: n must be nonnegative");
    if (!(t > 0.0)) throw domain_error("residual_fpp_equation: requires t > 0");
    const double pn = detail::fpp_value(n, t, law), pm = detail::fpp_value(n - 1, t, law);
    const double rhs = -law.lambda * (pn - pm);
    Fn f = [&](double s) { return detail::fpp_value(n, s, law); };
    std::vector<std::pair<std::string, double>> pt{{"n", n}, {"t", t}, {"beta", law.beta}, {"lambda", law.lambda}};
    if (law.beta == 1.0) {
        double lhs = caputo_deriv(f, 1.0, t, mesh);
        return detail::single("fpp_equation", pt, std::fabs(lhs - rhs), detail::max_abs({lhs, law.lambda * pn, law.lambda * pm}));
    }
    return detail::refine("fpp_equation", pt, mesh, refinements, [&](const MeshSpec& m) {
        double lhs = caputo_deriv(f, law.beta, t, m);
        return std::pair{std::fabs(lhs - rhs), detail::max_abs({lhs, law.lambda * pn, law.lambda * pm})};
    });
}

// Polya difference-differential equation with the closed-form t-derivative.
inline ResidualReport residual_polya_ode(int n, double t, const dist::GammaLaw& g) {
    g.validate();
    if (n < 0) throw domain_error("residual_polya_ode: n must be nonnegative");
    if (!(t > 0.0)) throw domain_error("residual_polya_ode: requires t > 0");
    const double a = g.alpha, p = g.p;
    const double e = dist::polya_pmf(n, t, g);
    const double em = n > 0 ? dist::polya_pmf(n - 1, t, g) : 0.0;
    const double d = e * (n / t - (n + p) / (a + t));
    const double u = (n + p) / (t + a) * e, v = (n - 1 + p) / (t + a) * em;
    return detail::single("polya_ode", {{"n", n}, {"t", t}, {"alpha", a}, {"p", p}}, std::fabs(d + u - v),
                          detail::max_abs({d, u, v}));
}

// d^k/dt^k eta(n | t, alpha, p) = (-1)^k Gamma(p + k beta) / (alpha^{k beta} Gamma(p)) (1-B)^{k beta} eta(. | t, alpha, p + k beta).
inline ResidualReport residual_sfpp_time_pde(int n, double t, const dist::SfppLaw& law, int k = 1) {
    law.validate();
    if (n < 0) throw domain_error("residual_sfpp_time_pde: n must be nonnegative");
    if (k < 1) throw domain_error("residual_sfpp_time_pde: requires k >= 1");
    if (!(t > 0.0)) throw domain_error("residual_sfpp_time_pde: requires t > 0");
    const double a = law.gamma.alpha, p = law.gamma.p, b = law.beta;
    const double lhs = detail::sfpp_time_derivative(n, t, law, k);
    using specfun::detail::lgam;
    const double c = std::exp(lgam(p + k * b) - lgam(p) - k * b * std::log(a)) * ((k & 1) ? -1.0 : 1.0);
    double largest = std::fabs(lhs);
    auto seq = [&](int j) {
        double v = detail::sfpp_value(j, t, a, p + k * b, b);
        largest = std::max(largest, std::fabs(c * v));
        return v;
    };
    const double rhs = c * frac_shift_apply(k * b, seq, n);
    return detail::single("sfpp_time_pde", {{"n", n}, {"t", t}, {"beta", b}, {"alpha", a}, {"p", p}, {"k", k}},
                          std::fabs(lhs - rhs), std::max(largest, std::fabs(rhs)));
}

// d^k/dt^k G(u | t, p) = (-(1-u)^beta)^k Gamma(p + k beta) / (alpha^{k beta} Gamma(p)) G(u | t, p + k beta).
inline ResidualReport residual_sfpp_pgf_pde(double u, double t, const dist::SfppLaw& law, int k = 1) {
    law.validate();
    if (!(u >= 0.0 && u < 1.0)) throw domain_error("residual_sfpp_pgf_pde: requires u in [0,1)");
    if (k < 1) throw domain_error("residual_sfpp_pgf_pde: requires k >= 1");
    if (!(t > 0.0)) throw domain_error("residual_sfpp_pgf_pde: requires t > 0");
    const double a = law.gamma.alpha, p = law.gamma.p, b = law.beta;
    const double w = std::pow(1.0 - u, b);
    // t-derivative under the integral: (-w)^k E[lambda^{k beta} exp(-lambda^beta t w)]
    auto f = [&](double lam) {
        return std::exp(k * b * std::log(lam) - std::pow(lam, b) * t * w + quad::log_gamma_density(lam, p, a));
    };
    std::vector<double> pts{0.0, p / a, (p + 4.0 * std::sqrt(p) + 1.0) / a, (p + 12.0 * std::sqrt(p) + 20.0) / a, quad::inf};
    for (double e = 1e-14; e < 1.0; e *= 100.0) pts.push_back(e * p / a);
    const double sign = (k & 1) ? -1.0 : 1.0;
    const double lhs = sign * std::pow(w, k) * quad::integrate_panels(f, pts, 1e-14).value;
    using specfun::detail::lgam;
    const double c = sign * std::pow(w, k) * std::exp(lgam(p + k * b) - lgam(p) - k * b * std::log(a));
    const double rhs = c * dist::sfpp_pgf(u, t, dist::SfppLaw{b, {a, p + k * b}});
    return detail::single("sfpp_pgf_pde", {{"u", u}, {"t", t}, {"beta", b}, {"alpha", a}, {"p", p}, {"k", k}},
                          std::fabs(lhs - rhs), detail::max_abs({lhs, rhs}));
}

// D^nu_t g(y | alpha, pt) = p D^{nu-1}_t (log(alpha y) - psi(pt)) g(y | alpha, pt); nu = 1 or nu in (1,2).
inline ResidualReport residual_gamma_rl_pde(double y, double t, const dist::GammaLaw& g, double nu,
                                            const MeshSpec& mesh = {}, int refinements = 2) {
    g.validate();
    if (!(y > 0.0 && t > 0.0)) throw domain_error("residual_gamma_rl_pde: requires y > 0 and t > 0");
    const double a = g.alpha, p = g.p;
    Fn dens = [&](double s) { return s <= 0.0 ? 0.0 : quad::gamma_density(y, p * s, a); };
    Fn rhs_fn = [&](double s) {
        return std::log(a * y) * dens(s) - detail::psi_gamma_density(y, p * s, a);
    };
    std::vector<std::pair<std::string, double>> pt{{"y", y}, {"t", t}, {"alpha", a}, {"p", p}, {"nu", nu}};
    if (nu == 1.0) {
        double lhs = caputo_deriv(dens, 1.0, t, mesh);
        double rhs = p * rhs_fn(t);
        return detail::single("gamma_rl_pde", pt, std::fabs(lhs - rhs), detail::max_abs({lhs, rhs}));
    }
    if (!(nu > 1.0 && nu < 2.0)) throw domain_error("residual_gamma_rl_pde: requires nu = 1 or nu in (1,2)");
    return detail::refine("gamma_rl_pde", pt, mesh, refinements, [&](const MeshSpec& m) {
        double lhs = rl_deriv(dens, nu, t, m);
        double rhs = p * rl_deriv(rhs_fn, nu - 1.0, t, m);
        return std::pair{std::fabs(lhs - rhs), detail::max_abs({lhs, rhs})};
    });
}

// (1/p) D^nu delta(n | pt) = D^{nu-1} (log alpha - psi(pt)) delta(n | pt) + int p_beta(n | y) log y D^{nu-1} g(y | alpha, pt) dy.
inline ResidualReport residual_fnbp_time_pde(int n, double t, const dist::FnbpLaw& law, double nu,
                                             const MeshSpec& mesh = {}, int refinements = 2) {
    law.fpp.validate();
    law.gamma.validate();
    if (n < 0) throw domain_error("residual_fnbp_time_pde: n must be nonnegative");
    if (!(t > 0.0)) throw domain_error("residual_fnbp_time_pde: requires t > 0");
    const double a = law.gamma.alpha, p = law.gamma.p;
    const dist::FppLaw& fpp = law.fpp;
    std::vector<std::pair<std::string, double>> pt{{"n", n},         {"t", t}, {"beta", fpp.beta}, {"lambda", fpp.lambda},
                                                   {"alpha", a}, {"p", p}, {"nu", nu}};
    auto y_points = [&](double shape) {
        const double mean = shape / a, sd = std::sqrt(shape) / a;
        // the gamma weight is below 1e-17 of its mass beyond the last point
        std::vector<double> pts{0.0, mean, mean + 4.0 * sd + 1.0 / a, mean + 12.0 * sd + 20.0 / a, mean + 20.0 * sd + 60.0 / a};
        for (double e = 1e-12; e < mean; e *= 10.0) pts.push_back(e);
        return pts;
    };
    if (nu == 1.0) {
        Fn delta = [&](double s) { return detail::fnbp_value(n, s, law); };
        const double lhs = caputo_deriv(delta, 1.0, t, mesh) / p;
        const double mid = (std::log(a) - specfun::digamma(p * t)) * delta(t);
        auto h = [&](double y) {
            return y <= 0.0 ? 0.0 : detail::fpp_value(n, y, fpp) * std::log(y) * quad::gamma_density(y, p * t, a);
        };
        const double last = quad::integrate_panels(h, y_points(p * t), 1e-11).value;
        return detail::single("fnbp_time_pde", pt, std::fabs(lhs - mid - last), detail::max_abs({lhs, mid, last}));
    }
    if (!(nu > 1.0 && nu < 2.0)) throw domain_error("residual_fnbp_time_pde: requires nu = 1 or nu in (1,2)");
    if (n == 0)
        throw unsupported_domain_error(
            "residual_fnbp_time_pde: for n = 0 and nu > 1 the right-hand terms diverge individually (psi(ps) ~ -1/(ps))");
    // limit of -psi(ps) delta(n | ps) as s -> 0
    auto j0 = [&](double y) { return y <= 0.0 ? 0.0 : detail::fpp_value(n, y, fpp) * std::exp(-a * y) / y; };
    std::vector<double> jpts{0.0, 1.0 / a, 10.0 / a, 50.0 / a, quad::inf};
    for (double e = 1e-12; e < 1.0 / a; e *= 10.0) jpts.push_back(e);
    const double mid0 = quad::integrate_panels(j0, jpts, 1e-12).value;
    Fn delta = [&](double s) { return detail::fnbp_value(n, s, law); };
    Fn mid = [&](double s) {
        if (s <= 0.0) return mid0;
        return (std::log(a) - specfun::digamma(p * s)) * delta(s);
    };
    return detail::refine("fnbp_time_pde", pt, mesh, refinements, [&](const MeshSpec& m) {
        const double lhs = rl_deriv(delta, nu, t, m) / p;
        const Functional op = rl_functional(nu - 1.0, t, m);
        const double mterm = op.apply(mid);
        std::vector<double> shape(op.nodes.size()), lg(op.nodes.size());
        for (std::size_t j = 0; j < op.nodes.size(); ++j) {
            shape[j] = p * op.nodes[j];
            lg[j] = shape[j] > 0.0 ? specfun::detail::lgam(shape[j]) : 0.0;
        }
        // y g(y | alpha, ps) stays bounded as y -> 0
        auto h = [&](double y) {
            if (y <= 0.0) return 0.0;
            const double w = detail::fpp_value(n, y, fpp);
            if (w == 0.0) return 0.0;
            const double ly = std::log(a * y);
            double sum = 0.0;
            for (std::size_t j = 0; j < shape.size(); ++j)
                if (shape[j] > 0.0 && op.weights[j] != 0.0) sum += op.weights[j] * std::exp(shape[j] * ly - a * y - lg[j]);
            return w / y * std::log(y) * sum;
        };
        const double last = quad::integrate_panels(h, y_points(p * t), 1e-9).value;
        return std::pair{std::fabs(lhs - mterm - last), detail::max_abs({lhs, mterm, last})};
    });
}

// d^r/d lambda^r delta(n | alpha, pt, lambda) against the H-series expansion; falling factorial n!/(n-i)! from Leibniz.
inline ResidualReport residual_fnbp_lambda_pde(int n, double t, const dist::FnbpLaw& law, int r = 1) {
    law.fpp.validate();
    law.gamma.validate();
    if (n < 0) throw domain_error("residual_fnbp_lambda_pde: n must be nonnegative");
    if (r < 1 || r > 2) throw domain_error("residual_fnbp_lambda_pde: supports r in {1, 2}");
    if (!(t > 0.0)) throw domain_error("residual_fnbp_lambda_pde: requires t > 0");
    const double b = law.fpp.beta, lam = law.fpp.lambda, a = law.gamma.alpha, shape = law.gamma.p * t;
    const double ab = std::pow(a, b);
    if (!(lam < ab)) throw convergence_domain_error("residual_fnbp_lambda_pde: requires lambda < alpha^beta");
    if (lam < 0.05) throw domain_error("residual_fnbp_lambda_pde: requires lambda >= 0.05");
    const double h = std::max(1e-4, 1e-3 * lam);
    if (lam + 4.0 * h >= ab) throw convergence_domain_error("residual_fnbp_lambda_pde: stencil crosses lambda = alpha^beta");
    Fn f = [&](double l) { return dist::fnbp_pmf_series(n, t, {{b, l}, law.gamma}).value; };
    auto fd = [&](double step) { return detail::derivative(f, lam, r, step); };
    const double lhs = (16.0 * fd(0.5 * h) - fd(h)) / 15.0;
    using specfun::detail::lgam;
    double rhs = 0.0, largest = std::fabs(lhs);
    for (int i = 0; i <= std::min(r, n); ++i) {
        double binom_r = std::exp(lgam(r + 1.0) - lgam(i + 1.0) - lgam(r - i + 1.0));
        double falling = std::exp(lgam(n + 1.0) - lgam(n - i + 1.0));
        double hv = specfun::h22_series(n, b, shape, r - i, lam / ab).value;
        double term = binom_r * falling * (((r - i) & 1) ? -1.0 : 1.0) *
                      std::exp((n - r) * std::log(lam) - n * b * std::log(a) - lgam(shape) - lgam(n + 1.0)) * hv;
        largest = std::max(largest, std::fabs(term));
        rhs += term;
    }
    return detail::single("fnbp_lambda_pde",
                          {{"n", n}, {"t", t}, {"beta", b}, {"lambda", lam}, {"alpha", a}, {"p", law.gamma.p}, {"r", r}},
                          std::fabs(lhs - rhs), largest);
}

}  // namespace fracnb::fraccalc

#endif
