#include <gtest/gtest.h>

#include <cmath>

#include "fracnb/fraccalc.hpp"
#include "oracle/oracle.hpp"

using namespace fracnb;
using namespace fracnb::fraccalc;

namespace {

double observed_order(double e1, double e2) { return std::log2(std::fabs(e1) / std::fabs(e2)); }

// errors already near rounding carry no order information
bool order_ok(double e2, double e3, double scale) {
    return std::fabs(e3) < 1e-9 * scale || observed_order(e2, e3) >= 1.5;
}

}  // namespace

TEST(Mesh, Validation) {
    EXPECT_THROW((MeshSpec{8}.validate()), domain_error);
    EXPECT_THROW((MeshSpec{64, 0.5}.validate()), domain_error);
    EXPECT_NO_THROW((MeshSpec{64, 2.0}.validate()));
    EXPECT_DOUBLE_EQ((MeshSpec{64}.exponent(0.5)), 4.0);
    EXPECT_DOUBLE_EQ((MeshSpec{64, 3.0}.exponent(0.5)), 3.0);
}

TEST(Operators, FracIntegralPowerRule) {
    for (double a : {0.3, 0.5, 1.5}) {
        Fn f = [](double s) { return s * s; };
        double exact = 2.0 / std::tgamma(3.0 + a);
        double e2 = frac_integral(f, a, 1.0, {256}) - exact, e3 = frac_integral(f, a, 1.0, {512}) - exact;
        EXPECT_LT(std::fabs(e3), 1e-5 * exact) << a;
        EXPECT_TRUE(order_ok(e2, e3, exact)) << a;
    }
}

TEST(Operators, PowerRuleWithOrder) {
    const double t = 1.3;
    for (double mu : {1.0, 2.0, 2.5}) {
        Fn f = [&](double s) { return std::pow(s, mu); };
        for (double nu : {0.3, 0.5, 0.8}) {
            double exact = std::tgamma(mu + 1.0) / std::tgamma(mu + 1.0 - nu) * std::pow(t, mu - nu);
            double c2 = caputo_deriv(f, nu, t, {128}) - exact;
            double c3 = caputo_deriv(f, nu, t, {256}) - exact;
            EXPECT_LT(std::fabs(c3), 1e-3 * std::fabs(exact)) << mu << " " << nu;
            EXPECT_TRUE(order_ok(c2, c3, exact)) << "caputo " << mu << " " << nu;
            double r2 = rl_deriv(f, nu, t, {128}) - exact;
            double r3 = rl_deriv(f, nu, t, {256}) - exact;
            EXPECT_LT(std::fabs(r3), 1e-3 * std::fabs(exact)) << mu << " " << nu;
            EXPECT_TRUE(order_ok(r2, r3, exact)) << "rl " << mu << " " << nu;
        }
        double nu = 1.5;
        double exact = std::tgamma(mu + 1.0) / std::tgamma(mu + 1.0 - nu) * std::pow(t, mu - nu);
        double e2 = rl_deriv(f, nu, t, {128}) - exact, e3 = rl_deriv(f, nu, t, {256}) - exact;
        EXPECT_LT(std::fabs(e3), 1e-3 * std::fabs(exact)) << mu;
        EXPECT_TRUE(order_ok(e2, e3, exact)) << "rl 1.5 " << mu;
    }
}

TEST(Operators, OrderOneIsDerivative) {
    Fn f = [](double s) { return std::sin(s); };
    EXPECT_NEAR(caputo_deriv(f, 1.0, 0.7, {}), std::cos(0.7), 1e-10);
    EXPECT_NEAR(rl_deriv(f, 1.0, 0.7, {}), std::cos(0.7), 1e-10);
}

TEST(Operators, ConstantUnderCaputoAndRl) {
    Fn one = [](double) { return 3.0; };
    EXPECT_NEAR(caputo_deriv(one, 0.5, 2.0, {}), 0.0, 1e-14);
    EXPECT_NEAR(rl_deriv(one, 0.5, 2.0, {}), 3.0 / std::sqrt(2.0) / std::tgamma(0.5), 1e-6);
}

TEST(Operators, CaputoRlRelation) {
    const double t = 0.9;
    std::vector<Fn> fs{[](double s) { return s; }, [](double s) { return s * s; }, [](double s) { return std::exp(-s); }};
    for (double nu : {0.3, 0.6}) {
        for (const auto& f : fs) {
            double lhs = caputo_deriv(f, nu, t, {512});
            double rhs = rl_deriv(f, nu, t, {512}) - f(0.0) * std::pow(t, -nu) / std::tgamma(1.0 - nu);
            EXPECT_NEAR(lhs, rhs, 5e-5 * std::max(1.0, std::fabs(rhs))) << nu;
        }
    }
}

TEST(Operators, NonFiniteValuesThrow) {
    Fn bad = [](double s) { return s > 0.5 ? NAN : s; };
    EXPECT_THROW(caputo_deriv(bad, 0.5, 1.0, {}), evaluation_error);
    EXPECT_THROW(rl_deriv(bad, 0.5, 1.0, {}), evaluation_error);
    Fn f = [](double s) { return s; };
    EXPECT_THROW(caputo_deriv(f, 1.5, 1.0, {}), domain_error);
    EXPECT_THROW(rl_deriv(f, 2.0, 1.0, {}), domain_error);
    EXPECT_THROW(frac_integral(f, 0.0, 1.0, {}), domain_error);
}

TEST(FracShift, OrderOneIsBackwardDifference) {
    auto seq = [](int k) { return k < 0 ? 0.0 : 1.0 / (k + 2.0); };
    for (int n = 0; n < 6; ++n) EXPECT_DOUBLE_EQ(frac_shift_apply(1.0, seq, n), seq(n) - seq(n - 1));
    EXPECT_DOUBLE_EQ(frac_shift_apply(0.37, seq, 0), seq(0));
}

TEST(FracShift, IteratedOrderOneGivesSignedBinomials) {
    auto delta = [](int k) { return k == 0 ? 1.0 : 0.0; };
    const int power = 5;
    for (int n = 0; n <= 8; ++n) {
        std::function<double(int, int)> apply = [&](int times, int m) -> double {
            if (times == 0) return m < 0 ? 0.0 : delta(m);
            return frac_shift_apply(1.0, [&](int j) { return apply(times - 1, j); }, m);
        };
        double expected = n <= power ? ((n & 1) ? -1.0 : 1.0) * std::tgamma(power + 1.0) /
                                           (std::tgamma(n + 1.0) * std::tgamma(power - n + 1.0))
                                     : 0.0;
        EXPECT_DOUBLE_EQ(apply(power, n), expected) << n;
    }
}

TEST(FracShift, LongSumOracleOnSfppRow) {
    const dist::SfppLaw law{0.5, {2.0, 1.0}};
    auto seq = [&](int k) { return k < 0 ? 0.0 : dist::sfpp_pmf(k, 1.0, law).value; };
    for (int n : {0, 3, 7}) {
        double oracle = 0.0;
        for (int r = 0; r <= 200; ++r) {
            double c = 1.0;
            for (int i = 0; i < r; ++i) c *= (0.5 - i) / (i + 1.0);
            oracle += ((r & 1) ? -c : c) * seq(n - r);
        }
        EXPECT_NEAR(frac_shift_apply(0.5, seq, n), oracle, 1e-15) << n;
    }
}

TEST(FppEquation, ClassicalAtBetaOne) {
    for (int n : {0, 1, 4}) {
        auto rep = residual_fpp_equation(n, 1.0, {1.0, 1.5});
        EXPECT_LT(rep.residual(), 1e-8) << n;
    }
}

TEST(FppEquation, SelfConvergence) {
    auto rep = residual_fpp_equation(0, 1.0, {0.6, 1.0});
    ASSERT_EQ(rep.meshes.size(), 3u);
    ASSERT_EQ(rep.ratios.size(), 2u);
    EXPECT_TRUE(rep.decays());
    for (double r : rep.ratios) EXPECT_LT(r, 0.6);
    EXPECT_TRUE(rep.pass());
    auto rep2 = residual_fpp_equation(2, 1.0, {0.6, 1.0});
    EXPECT_TRUE(rep2.pass()) << rep2.relative();
}

TEST(FppEquation, MittagLefflerEigenfunction) {
    const double b = 0.6, lam = 1.0, t = 1.0;
    Fn f = [&](double s) { return oracle::ml(b, -lam * std::pow(s, b)); };
    double lhs = caputo_deriv(f, b, t, {512});
    EXPECT_LT(std::fabs(lhs + lam * oracle::ml(b, -lam)), 5e-4);
}

TEST(PolyaOde, ClosedFormResiduals) {
    for (int n = 0; n <= 10; ++n)
        for (double t : {0.5, 1.0, 2.0}) {
            auto rep = residual_polya_ode(n, t, {2.0, 1.0});
            EXPECT_LT(rep.residual(), 1e-10) << n << " " << t;
        }
    auto tail = residual_polya_ode(60, 1.0, {2.0, 1.0});
    EXPECT_LT(tail.residual() / dist::polya_pmf(60, 1.0, {2.0, 1.0}), 1e-8);
    const double a = 2.0, p = 1.5, t = 0.8;
    double eta0 = std::pow(a / (t + a), p);
    double h = 1e-4;
    double d = (std::pow(a / (t + h + a), p) - std::pow(a / (t - h + a), p)) / (2 * h);
    EXPECT_NEAR(d, -p / (t + a) * eta0, 1e-8);
}

TEST(SfppTimePde, SeriesBothSides) {
    const dist::SfppLaw law{0.5, {2.0, 1.0}};
    EXPECT_LT(residual_sfpp_time_pde(0, 1.0, law, 1).residual(), 1e-6);
    for (int n : {1, 3}) {
        EXPECT_TRUE(residual_sfpp_time_pde(n, 1.0, law, 1).pass(1e-6)) << n;
        EXPECT_TRUE(residual_sfpp_time_pde(n, 1.0, law, 2).pass(1e-6)) << n;
    }
    EXPECT_LT(residual_sfpp_time_pde(3, 1.0, {1.0, {2.0, 1.0}}, 1).residual(), 1e-9);
}

TEST(SfppTimePde, SecondOrderIsTwiceFirst) {
    const double a = 2.0, p = 1.0, b = 0.5, t = 1.0;
    const dist::SfppLaw law{b, {a, p}};
    auto c1 = [&](double shape) { return std::tgamma(shape + b) / (std::pow(a, b) * std::tgamma(shape)); };
    for (int n : {0, 2, 4}) {
        double d2 = fraccalc::detail::sfpp_time_derivative(n, t, law, 2);
        auto first = [&](int j) { return j < 0 ? 0.0 : fraccalc::detail::sfpp_time_derivative(j, t, {b, {a, p + b}}, 1); };
        double twice = -c1(p) * frac_shift_apply(b, first, n);
        EXPECT_NEAR(d2, twice, 1e-6 * std::max(1.0, std::fabs(d2))) << n;
    }
}

TEST(SfppPgfPde, QuadratureBothSides) {
    const dist::SfppLaw law{0.5, {2.0, 1.0}};
    EXPECT_LT(residual_sfpp_pgf_pde(0.5, 1.0, law, 1).residual(), 1e-7);
    EXPECT_LT(residual_sfpp_pgf_pde(0.5, 1.0, law, 2).residual(), 1e-7);
    EXPECT_LT(residual_sfpp_pgf_pde(0.3, 1.0, {1.0, {2.0, 1.0}}, 1).residual(), 1e-9);
    auto r0 = residual_sfpp_pgf_pde(0.0, 1.0, law, 1);
    auto n0 = residual_sfpp_time_pde(0, 1.0, law, 1);
    EXPECT_LT(r0.residual(), 1e-7);
    EXPECT_LT(n0.residual(), 1e-7);
    EXPECT_THROW(residual_sfpp_pgf_pde(1.0, 1.0, law), domain_error);
}

TEST(GammaRlPde, OrderOne) {
    const dist::GammaLaw g{2.0, 1.0};
    EXPECT_LT(residual_gamma_rl_pde(1.0, 1.0, g, 1.0).residual(), 1e-9);
    double y = std::exp(specfun::digamma(1.0)) / 2.0;
    Fn dens = [&](double s) { return quad::gamma_density(y, s, 2.0); };
    EXPECT_LT(std::fabs(caputo_deriv(dens, 1.0, 1.0, {})), 1e-9);
}

TEST(GammaRlPde, FractionalSelfConvergence) {
    auto rep = residual_gamma_rl_pde(1.0, 1.0, {2.0, 1.0}, 1.5);
    EXPECT_TRUE(rep.pass()) << rep.relative();
    for (double r : rep.ratios) EXPECT_LT(r, 0.6);
    EXPECT_THROW(residual_gamma_rl_pde(1.0, 1.0, {2.0, 1.0}, 0.5), domain_error);
}

TEST(FnbpTimePde, OrderOne) {
    const dist::FnbpLaw law{{0.5, 1.0}, {2.0, 1.0}};
    for (int n : {0, 1, 3}) {
        auto rep = residual_fnbp_time_pde(n, 1.0, law, 1.0);
        EXPECT_LT(rep.residual(), 1e-5) << n;
    }
    const dist::FnbpLaw nb{{1.0, 1.0}, {2.0, 1.0}};
    for (int n : {0, 2}) EXPECT_LT(residual_fnbp_time_pde(n, 1.0, nb, 1.0).residual(), 1e-7) << n;
}

TEST(FnbpTimePde, FractionalSelfConvergence) {
    const dist::FnbpLaw law{{0.5, 1.0}, {2.0, 1.0}};
    auto rep = residual_fnbp_time_pde(1, 1.0, law, 1.5, {128});
    EXPECT_TRUE(rep.pass()) << rep.relative();
    for (double r : rep.ratios) EXPECT_LT(r, 0.6);
    EXPECT_THROW(residual_fnbp_time_pde(0, 1.0, law, 1.5), unsupported_domain_error);
    EXPECT_THROW(residual_fnbp_time_pde(1, 1.0, law, 2.0), domain_error);
}

TEST(FnbpLambdaPde, SeriesAgainstFiniteDifferences) {
    const dist::FnbpLaw law{{0.5, 0.5}, {2.0, 1.0}};
    EXPECT_LT(residual_fnbp_lambda_pde(1, 1.0, law, 1).residual(), 1e-5);
    EXPECT_LT(residual_fnbp_lambda_pde(0, 1.0, law, 1).residual(), 1e-5);
    EXPECT_TRUE(residual_fnbp_lambda_pde(3, 1.0, law, 1).pass());
    EXPECT_TRUE(residual_fnbp_lambda_pde(2, 1.0, law, 2).pass());
    EXPECT_THROW(residual_fnbp_lambda_pde(1, 1.0, {{0.5, 1.5}, {2.0, 1.0}}, 1), convergence_domain_error);
    EXPECT_THROW(residual_fnbp_lambda_pde(1, 1.0, {{0.5, 0.01}, {2.0, 1.0}}, 1), domain_error);
    EXPECT_THROW(residual_fnbp_lambda_pde(1, 1.0, law, 3), domain_error);
}

TEST(FnbpLambdaPde, ClosedFormAtBetaOne) {
    const double a = 2.0, p = 1.0, t = 1.0, lam = 0.5;
    const dist::FnbpLaw law{{1.0, lam}, {a, p}};
    for (int n : {0, 1, 4}) {
        auto rep = residual_fnbp_lambda_pde(n, t, law, 1);
        double r = p * t;
        double pmf = std::exp(std::lgamma(n + r) - std::lgamma(r) - std::lgamma(n + 1.0) + n * std::log(lam / (a + lam)) +
                              r * std::log(a / (a + lam)));
        double exact = pmf * (n / lam - (n + r) / (a + lam));
        EXPECT_LT(rep.residual(), 1e-8) << n;
        auto f = [&](double l) { return dist::fnbp_pmf(n, t, {{1.0, l}, {a, p}}).value; };
        double h = 1e-4;
        double fd = (-f(lam + 2 * h) + 8 * f(lam + h) - 8 * f(lam - h) + f(lam - 2 * h)) / (12 * h);
        EXPECT_NEAR(fd, exact, 1e-8) << n;
    }
}

TEST(ResidualReport, Accessors) {
    ResidualReport r;
    EXPECT_TRUE(std::isnan(r.residual()));
    r.residuals = {1e-3, 2e-4, 5e-5};
    r.scales = {1.0, 1.0, 1.0};
    EXPECT_TRUE(r.decays());
    EXPECT_TRUE(r.pass());
    r.residuals = {1e-3, 2e-3, 5e-5};
    EXPECT_FALSE(r.decays());
    r.residuals = {1e-15, 2e-15, 5e-16};
    EXPECT_TRUE(r.decays());
}
