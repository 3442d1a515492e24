#include <gtest/gtest.h>

#include <cmath>

#include "fracnb/stats.hpp"

using namespace fracnb;
using namespace fracnb::stats;

namespace {

std::vector<CurvePoint> power_curve(double c, double d, double t0, double t1, int k) {
    std::vector<CurvePoint> out;
    for (double t : log_grid(t0, t1, k)) out.push_back({t, c * std::pow(t, -d), 0.0, false});
    return out;
}

const dist::FnbpLaw fnbp_half{{0.5, 1.0}, {2.0, 1.0}};

}  // namespace

TEST(Distance, IdenticalSamplesHaveZeroDistance) {
    auto x = paths::sample_marginals(dist::ProcessLaw::poisson(1.0), 1.0, 2000, 1);
    EXPECT_EQ(tv_distance(empirical_pmf(x), empirical_pmf(x)), 0.0);
    auto ks = ks_two_sample(x, x);
    EXPECT_EQ(ks.statistic, 0.0);
    EXPECT_DOUBLE_EQ(ks.p_value, 1.0);
}

TEST(Distance, EmptyInputsThrow) {
    EXPECT_THROW(empirical_pmf({}), domain_error);
    EXPECT_THROW(ks_two_sample(std::vector<double>{}, std::vector<double>{1.0}), domain_error);
    EXPECT_THROW(chi_square_gof(std::vector<std::int64_t>(10, 0), dist::poisson_table(1.0, 1.0, 10)), domain_error);
}

TEST(Distance, TvOfDisjointTablesIsOne) {
    auto a = dist::poisson_table(1.0, 1e-20, 5);
    auto b = empirical_pmf(std::vector<std::int64_t>(100, 3));
    EXPECT_NEAR(tv_distance(a, b), 1.0, 1e-12);
}

TEST(ChiSquare, PoissonPassesAgainstOwnTable) {
    auto x = paths::sample_marginals(dist::ProcessLaw::poisson(1.0), 1.0, 10000, 2);
    auto g = chi_square_gof(x, dist::poisson_table(1.0, 1.0, 40));
    EXPECT_TRUE(g.pass()) << g.statistic << " " << g.p_value;
    EXPECT_GE(g.dof, 3);
}

TEST(ChiSquare, PoissonOneRejectsPoissonTwo) {
    auto x = paths::sample_marginals(dist::ProcessLaw::poisson(1.0), 1.0, 10000, 3);
    auto g = chi_square_gof(x, dist::poisson_table(1.0, 2.0, 40));
    EXPECT_FALSE(g.pass());
    EXPECT_LT(g.p_value, 1e-10);
}

TEST(Ks, OneSampleExponential) {
    auto x = paths::ensemble(5000, 4, [](RngStream& r, std::size_t) { return paths::sample_gamma(1.0, 2.0, r); });
    EXPECT_TRUE(ks_one_sample(x, [](double v) { return 1.0 - std::exp(-2.0 * v); }).pass());
    EXPECT_FALSE(ks_one_sample(x, [](double v) { return 1.0 - std::exp(-1.5 * v); }).pass());
}

TEST(Ks, KolmogorovTailKnownValues) {
    EXPECT_NEAR(kolmogorov_q(1.0), 0.26999967, 1e-7);
    EXPECT_NEAR(kolmogorov_q(1.628), 0.01, 1e-4);
    EXPECT_DOUBLE_EQ(kolmogorov_q(0.0), 1.0);
}

TEST(MeanCi, CoversKnownMean) {
    auto x = paths::ensemble(20000, 5, [](RngStream& r, std::size_t) { return paths::sample_gamma(2.0, 2.0, r); });
    auto c = mean_ci(x);
    EXPECT_TRUE(c.contains(1.0)) << c.mean << " " << c.stderr_;
    EXPECT_NEAR(sample_variance(x), 0.5, 0.05);
}

TEST(Exponent, ExactPowerLawsRecovered) {
    auto f = fit_power_exponent(power_curve(3.0, 0.5, 50, 1000, 9), 50, 1000);
    EXPECT_NEAR(f.d, 0.5, 1e-6);
    EXPECT_NEAR(f.intercept, std::log(3.0), 1e-6);
    EXPECT_EQ(f.classification, Dependence::lrd);
    EXPECT_EQ(f.points, 9u);
    EXPECT_LT(f.stderr_, 1e-9);
    auto g = fit_power_exponent(power_curve(1.0, 1.25, 50, 1000, 9), 50, 1000);
    EXPECT_NEAR(g.d, 1.25, 1e-6);
    EXPECT_EQ(g.classification, Dependence::srd);
    EXPECT_EQ(fit_power_exponent(power_curve(1.0, 2.5, 1, 10, 6), 1, 10).classification, Dependence::other);
}

TEST(Exponent, WindowRestrictsPoints) {
    auto c = power_curve(1.0, 0.3, 1, 1000, 13);
    auto f = fit_power_exponent(c, 9.9, 1000);
    EXPECT_EQ(f.points, 9u);
    EXPECT_NEAR(f.d, 0.3, 1e-9);
}

TEST(Exponent, InvalidWindowsThrow) {
    auto c = power_curve(1.0, 0.5, 50, 1000, 4);
    EXPECT_THROW(fit_power_exponent(c, 50, 1000), domain_error);
    auto n = power_curve(1.0, 0.5, 50, 1000, 8);
    n[3].value = -0.1;
    EXPECT_THROW(fit_power_exponent(n, 50, 1000), domain_error);
}

TEST(CorrCurve, EqualTimeIsExactlyOne) {
    auto c = corr_curve(dist::ProcessLaw::of(fnbp_half), 1.0, {1.0, 2.0}, 2000, 6);
    EXPECT_EQ(c[0].value, 1.0);
    EXPECT_GT(c[1].value, 0.0);
    EXPECT_THROW(corr_curve(dist::ProcessLaw::of(fnbp_half), 3.0, {1.0, 2.0}, 100, 6), domain_error);
}

TEST(CorrCurve, NbProcessMatchesLevyCovariance) {
    dist::FnbpLaw nb{{1.0, 1.0}, {2.0, 1.0}};
    std::vector<double> grid{2.0, 5.0, 20.0};
    auto c = corr_curve(dist::ProcessLaw::of(nb), 1.0, grid, 20000, 7);
    for (const auto& p : c) {
        EXPECT_NEAR(p.value, std::sqrt(1.0 / p.t), 4.0 * p.stderr_) << p.t;
        EXPECT_NEAR(fnbp_corr(1.0, p.t, nb), std::sqrt(1.0 / p.t), 1e-8);
    }
}

TEST(CorrCurve, FnbpMonteCarloMatchesQuadrature) {
    std::vector<double> grid{2.0, 10.0, 50.0};
    auto c = corr_curve(dist::ProcessLaw::of(fnbp_half), 1.0, grid, 20000, 8, 0.02);
    for (const auto& p : c) EXPECT_NEAR(p.value, fnbp_corr(1.0, p.t, fnbp_half), 4.0 * p.stderr_) << p.t;
}

TEST(CorrCurve, FnbpPositiveAndDecreasing) {
    auto q = fnbp_corr_curve_quadrature(fnbp_half, 1.0, log_grid(2, 1000, 10));
    for (std::size_t i = 0; i < q.size(); ++i) {
        EXPECT_GT(q[i].value, 0.0);
        if (i) EXPECT_LT(q[i].value, q[i - 1].value);
    }
    auto f = fit_power_exponent(q, 50, 1000);
    EXPECT_EQ(f.classification, Dependence::lrd);
    EXPECT_NEAR(f.d, 0.5, 0.15);
}

TEST(IncrementCurve, NbProcessIncrementsUncorrelated) {
    dist::FnbpLaw nb{{1.0, 1.0}, {2.0, 1.0}};
    EXPECT_NEAR(fnbp_increment_corr(1.0, 1.0, 5.0, nb), 0.0, 1e-7);
    auto c = increment_corr_curve(nb, 1.0, 1.0, {3.0, 10.0}, 20000, 9);
    for (const auto& p : c) EXPECT_NEAR(p.value, 0.0, 4.0 * p.stderr_);
}

TEST(IncrementCurve, FnbpShortRangeExponent) {
    auto q = fnbp_increment_corr_curve_quadrature(fnbp_half, 1.0, 1.0, log_grid(50, 1000, 8));
    for (std::size_t i = 0; i < q.size(); ++i) {
        EXPECT_GT(q[i].value, 0.0);
        if (i) EXPECT_LT(q[i].value, q[i - 1].value);
    }
    auto f = fit_power_exponent(q, 50, 1000);
    EXPECT_EQ(f.classification, Dependence::srd);
    EXPECT_NEAR(f.d, 1.25, 0.2);
    EXPECT_THROW(increment_corr_curve(fnbp_half, 1.0, 1.0, {1.5}, 100, 1), domain_error);
}

TEST(SelfSimilarity, UnitScaleIsIdentity) {
    auto g = self_similarity_test(SimilarityKind::inverse, {0.5}, 1.0, 1.0, 2000, 10);
    EXPECT_EQ(g.test, "self_similarity");
    EXPECT_TRUE(g.pass());
}

TEST(SelfSimilarity, InverseStableIndexBeta) {
    EXPECT_TRUE(self_similarity_test(SimilarityKind::inverse, {0.5}, 1.0, 4.0, 10000, 11).pass());
}

TEST(SelfSimilarity, StableIndexOneOverBeta) {
    EXPECT_TRUE(self_similarity_test(SimilarityKind::stable, {0.6}, 1.0, 3.0, 10000, 12).pass());
}

TEST(SelfSimilarity, IteratedIndexProduct) {
    EXPECT_TRUE(self_similarity_test(SimilarityKind::iterated, {0.7, 0.8}, 1.0, 2.0, 10000, 13).pass());
}

TEST(SelfSimilarity, WrongIndexRejects) {
    EXPECT_FALSE(self_similarity_test(SimilarityKind::inverse, {0.5}, 1.0, 4.0, 10000, 14, 1.0).pass());
    EXPECT_FALSE(self_similarity_test(SimilarityKind::iterated, {0.7, 0.8}, 1.0, 4.0, 10000, 15, 0.7).pass());
}

TEST(Renewal, PoissonConcentrates) {
    auto x = paths::ensemble(2000, 16, [](RngStream& r, std::size_t) {
        return double(paths::fpp_at(1e3, {1.0, 2.0}, r)) / 1e3;
    });
    EXPECT_NEAR(mean_ci(x).mean, 2.0, 0.01);
    EXPECT_LT(sample_variance(x), 3e-3);
}

TEST(Renewal, FppLimitLaw) {
    EXPECT_TRUE(renewal_limit_check(dist::ProcessLaw::of(dist::FppLaw{0.5, 1.0}), 1e3, 10000, 17).pass());
    EXPECT_TRUE(renewal_limit_check(dist::ProcessLaw::of(dist::FppLaw{0.7, 2.0}), 1e3, 10000, 18).pass());
}

TEST(Renewal, FnbpLimitLaw) {
    EXPECT_TRUE(renewal_limit_check(dist::ProcessLaw::of(fnbp_half), 1e3, 10000, 19).pass());
}

TEST(Renewal, WrongScaleRejects) {
    dist::FnbpLaw q = fnbp_half;
    auto g = renewal_limit_check(dist::ProcessLaw::of(dist::FppLaw{0.5, 1.0}), 1e3, 10000, 20);
    EXPECT_LT(g.statistic, 0.03);
    auto x = paths::ensemble(10000, 21, [&](RngStream& r, std::size_t) {
        return double(paths::fnbp_at(1e3, q, r)) / std::pow(1e3, 0.5);
    });
    auto y = paths::ensemble(10000, 22, [](RngStream& r, std::size_t) { return paths::inverse_stable_marginal(0.5, 1.0, r); });
    EXPECT_FALSE(ks_two_sample(x, y).pass());
    EXPECT_THROW(renewal_limit_check(dist::ProcessLaw::polya({2.0, 1.0}), 1e3, 100, 1), domain_error);
}

TEST(Increments, PolyaClosedForms) {
    dist::GammaLaw g{2.0, 1.0};
    EXPECT_NEAR(polya_joint_increment_pmf(0, 0, 1.0, 1.0, g), std::pow(2.0 / 4.0, 1.0), 1e-14);
    EXPECT_NEAR(polya_product_increment_pmf(0, 0, 1.0, 1.0, g), std::pow(2.0 / 3.0, 2.0), 1e-14);
    double s = 0.0;
    for (int n = 0; n < 200; ++n)
        for (int m = 0; m < 200; ++m) s += polya_joint_increment_pmf(n, m, 1.0, 1.0, g);
    EXPECT_NEAR(s, 1.0, 1e-6);
    double marg = 0.0;
    for (int m = 0; m < 400; ++m) marg += polya_joint_increment_pmf(2, m, 1.0, 1.5, g);
    EXPECT_NEAR(marg, dist::polya_pmf(2, 1.0, g), 1e-10);
}

TEST(Increments, PolyaMatchesJointNotProduct) {
    auto r = increment_independence_check(dist::ProcessLaw::polya({2.0, 1.0}), 1.0, 2.0, 3.0, 0, 0, 50000, 23);
    EXPECT_TRUE(r.matches_joint()) << r.z_joint;
    EXPECT_TRUE(r.rejects_product()) << r.z_product;
    EXPECT_FALSE(r.independence.pass());
}

TEST(Increments, PoissonControlIndependent) {
    auto r = increment_independence_check(dist::ProcessLaw::poisson(1.0), 1.0, 2.0, 3.0, 0, 0, 50000, 24);
    EXPECT_TRUE(r.matches_joint());
    EXPECT_FALSE(r.rejects_product());
    EXPECT_TRUE(r.independence.pass());
}

TEST(Increments, SfppDependenceDetected) {
    dist::SfppLaw s{0.5, {2.0, 1.0}};
    auto r = increment_independence_check(dist::ProcessLaw::of(s), 1.0, 2.0, 3.0, 0, 0, 50000, 25);
    EXPECT_FALSE(r.independence.pass());
    EXPECT_TRUE(std::isnan(r.joint_closed));
}

TEST(Stationarity, SfppAndPoissonStationary) {
    dist::SfppLaw s{0.5, {2.0, 1.0}};
    auto a = stationarity_check(dist::ProcessLaw::of(s), 1.0, {0.0, 2.0, 5.0}, 10000, 26);
    EXPECT_EQ(a.pairs.size(), 3u);
    EXPECT_TRUE(a.stationary()) << a.min_p;
    EXPECT_TRUE(stationarity_check(dist::ProcessLaw::poisson(1.0), 1.0, {0.0, 2.0, 5.0}, 10000, 27).stationary());
}

TEST(Stationarity, FppIncrementsNonstationary) {
    auto a = stationarity_check(dist::ProcessLaw::of(dist::FppLaw{0.5, 1.0}), 1.0, {0.0, 5.0}, 5000, 28, 1e-2);
    EXPECT_FALSE(a.stationary());
    EXPECT_THROW(stationarity_check(dist::ProcessLaw::poisson(1.0), 1.0, {0.0}, 10, 1), domain_error);
}

TEST(Overdispersion, FnbpOverdispersedPoissonNot) {
    for (double t : {0.5, 2.0}) {
        auto x = paths::sample_marginals(dist::ProcessLaw::of(fnbp_half), t, 20000, 29);
        auto r = overdispersion(x);
        EXPECT_TRUE(r.overdispersed) << t << " " << r.excess << " " << r.excess_stderr;
        EXPECT_NEAR(r.mean, dist::fnbp_mean(t, fnbp_half), 4.0 * std::sqrt(r.variance / 20000));
    }
    auto p = overdispersion(paths::sample_marginals(dist::ProcessLaw::poisson(1.0), 3.0, 20000, 30));
    EXPECT_FALSE(p.overdispersed);
    EXPECT_NEAR(p.excess, 0.0, 4.0 * p.excess_stderr);
}
