#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "evt/simlab.hpp"
#include "oracles.hpp"

using namespace evt;

namespace {

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST(SimulateMaxima, UniformStaysBelowEndpoint) {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto run = simulate_maxima(make_uniform01(), 10, 1, -1.0, seed);
        ASSERT_EQ(run.normalized_maxima.size(), 1u);
        EXPECT_LE(run.normalized_maxima[0], 0.0);
        EXPECT_NEAR(run.norming.a, 0.1, 1e-15);
    }
}

TEST(SimulateMaxima, ExponentialMeanIsEulerMascheroni) {
    const auto run = simulate_maxima(make_exponential(), 1000, 10000, 0.0, 42);
    // sd of the mean is pi / sqrt(6 * 1e4) ~ 0.0128.
    EXPECT_NEAR(mean(run.normalized_maxima), oracle::kEulerMascheroni, 0.05);
}

TEST(SimulateMaxima, Deterministic) {
    const auto a = simulate_maxima(make_std_normal(), 50, 200, 0.0, 9);
    const auto b = simulate_maxima(make_std_normal(), 50, 200, 0.0, 9);
    const auto c = simulate_maxima(make_std_normal(), 50, 200, 0.0, 10);
    EXPECT_EQ(a.normalized_maxima, b.normalized_maxima);
    EXPECT_NE(a.normalized_maxima, c.normalized_maxima);
    EXPECT_EQ(a.seed, 9u);
    EXPECT_EQ(a.block_size, 50u);
    EXPECT_EQ(a.spec_label, "normal");
}

TEST(SimulateMaxima, ThreadCountDoesNotChangeResults) {
    const auto serial = simulate_maxima(make_pareto(2.0), 100, 997, 0.5, 5);
    for (unsigned threads : {2u, 3u, 8u}) {
        SimulationOptions opts;
        opts.threads = threads;
        const auto par = simulate_maxima(make_pareto(2.0), 100, 997, 0.5, 5, opts);
        EXPECT_EQ(par.normalized_maxima, serial.normalized_maxima) << threads;
    }
}

TEST(SimulateMaxima, MaximumOfDrawsEqualsQuantileOfMinimum) {
    const auto spec = make_exponential();
    const NormingPair id{1.0, 0.0, 20};
    const auto run = simulate_maxima(spec, 20, 50, id, 77);
    for (std::size_t r = 0; r < 50; ++r) {
        UniformStream s(77, r);
        double mx = -kInf;
        for (int j = 0; j < 20; ++j) mx = std::max(mx, upper_quantile(spec, s.next()));
        EXPECT_DOUBLE_EQ(run.normalized_maxima[r], mx);
    }
}

TEST(SimulateMaxima, BetaFastPathMatchesHonestPathInLaw) {
    SimulationOptions fast;
    fast.beta_minimum = true;
    const auto honest = simulate_maxima(make_exponential(), 500, 20000, 0.0, 3);
    const auto beta = simulate_maxima(make_exponential(), 500, 20000, 0.0, 4, fast);
    EXPECT_NEAR(mean(beta.normalized_maxima), oracle::kEulerMascheroni, 0.04);
    EXPECT_NEAR(mean(beta.normalized_maxima), mean(honest.normalized_maxima), 0.05);
    // Two-sample KS at the 1% level: 1.63 sqrt(2 / n).
    auto a = honest.normalized_maxima, b = beta.normalized_maxima;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    EXPECT_LE(d, 1.63 * std::sqrt(2.0 / 20000.0));
    EXPECT_LE(empirical_sup_distance(beta, 0.0).sup_distance, 0.02);
}

TEST(SimulateMaxima, Errors) {
    EXPECT_THROW(simulate_maxima(make_exponential(), 1, 10, 0.0, 1), InvalidParameter);
    EXPECT_THROW(simulate_maxima(make_exponential(), 10, 0, 0.0, 1), InvalidParameter);
    EXPECT_THROW(simulate_maxima(make_exponential(), 10, 10, -1.0, 1), EndpointError);
}

TEST(EmpiricalSupDistance, ConstructedSample) {
    MaxRun run;
    run.reps = 400;
    for (std::size_t i = 1; i <= run.reps; ++i)
        run.normalized_maxima.push_back(gev_quantile({0.0, 0.0, 1.0}, (i - 0.5) / run.reps));
    std::reverse(run.normalized_maxima.begin(), run.normalized_maxima.end());
    EXPECT_NEAR(empirical_sup_distance(run, 0.0).sup_distance, 0.5 / run.reps, 1e-12);
}

TEST(EmpiricalSupDistance, SinglePoint) {
    MaxRun run;
    run.reps = 1;
    run.normalized_maxima = {0.3};
    const double u = frechet_cdf(2.0, 0.3);
    EXPECT_NEAR(empirical_sup_distance(run, 0.5).sup_distance, std::max(u, 1.0 - u), 1e-15);
}

TEST(EmpiricalSupDistance, ExponentialMaxima) {
    const auto run = simulate_maxima(make_exponential(), 1000, 10000, 0.0, 42);
    const auto rep = empirical_sup_distance(run, 0.0);
    EXPECT_LE(rep.sup_distance, 0.02);
    EXPECT_FALSE(rep.analytic);
    EXPECT_EQ(rep.deviations.size(), 10000u);
}

TEST(EmpiricalSupDistance, GumbelMaxStability) {
    const std::size_t m = 1000, reps = 10000;
    const NormingPair norming{1.0, std::log(static_cast<double>(m)), m};
    const auto run = simulate_maxima(make_gev({0.0, 0.0, 1.0}), m, reps, norming, 11);
    EXPECT_LE(empirical_sup_distance(run, 0.0).sup_distance, 1.5 * 1.36 / std::sqrt(static_cast<double>(reps)));
    EXPECT_LE(analytic_sup_distance(make_gev({0.0, 0.0, 1.0}), norming, 0.0, m).sup_distance, 1e-12);
}

TEST(AnalyticSupDistance, ExponentialRate) {
    const auto rep = analytic_sup_distance(make_exponential(), 0.0, 1000);
    EXPECT_GE(rep.sup_distance, 1e-4);
    EXPECT_LE(rep.sup_distance, 5e-4);
    EXPECT_TRUE(rep.analytic);
    // Dense-grid oracle on |(1 - e^{-x}/n)^n - Lambda(x)|.
    const double dense = oracle::dense_sup(
        [](double x) { return std::pow(1.0 - std::exp(-x) / 1000.0, 1000.0) - std::exp(-std::exp(-x)); }, -2.0, 8.0,
        200001);
    EXPECT_NEAR(rep.sup_distance, dense, 1e-7);
    double prev = 1.0;
    for (std::size_t n : {100u, 1000u, 10000u}) {
        const double d = analytic_sup_distance(make_exponential(), 0.0, n).sup_distance;
        EXPECT_LT(d, prev);
        EXPECT_GE(n * d, 0.20);
        EXPECT_LE(n * d, 0.35);
        prev = d;
    }
}

TEST(AnalyticSupDistance, Uniform) {
    EXPECT_LE(analytic_sup_distance(make_uniform01(), -1.0, 1000).sup_distance, 5e-4);
}

TEST(AnalyticSupDistance, GaussianSlowConvergence) {
    const double frozen[] = {0.04803, 0.04046, 0.03523};
    double prev = 1.0;
    int i = 0;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        const auto g = gaussian_norming(n);
        const double d = analytic_sup_distance(make_std_normal(), g.expansion, 0.0, n).sup_distance;
        EXPECT_NEAR(d, frozen[i++], 1e-4);
        EXPECT_LT(d, prev);
        prev = d;
    }
    EXPECT_LE(prev, 0.15);
}

TEST(ScheffeTv, IdentityIsZero) {
    EXPECT_NEAR(scheffe_tv(make_gev({0.0, 0.0, 1.0}), NormingPair{1.0, 0.0, 1}, 0.0, 1), 0.0, 1e-9);
    EXPECT_NEAR(scheffe_tv(make_gev(classic_limit(0.5)), NormingPair{1.0, 0.0, 1}, 0.5, 1), 0.0, 1e-9);
    EXPECT_NEAR(scheffe_tv(make_gev(classic_limit(-1.0)), NormingPair{1.0, 0.0, 1}, -1.0, 1), 0.0, 1e-9);
}

TEST(ScheffeTv, DecreasesAndDominatesSupDistance) {
    double prev = 1.0;
    for (std::size_t n : {10u, 100u, 1000u}) {
        const double tv = scheffe_tv(make_exponential(), 0.0, n);
        EXPECT_LT(tv, prev) << n;
        EXPECT_GE(tv, analytic_sup_distance(make_exponential(), 0.0, n).sup_distance * (1 - 1e-6)) << n;
        prev = tv;
    }
    const double tv_u = scheffe_tv(make_uniform01(), -1.0, 100);
    EXPECT_GE(tv_u, analytic_sup_distance(make_uniform01(), -1.0, 100).sup_distance * (1 - 1e-6));
    EXPECT_LE(tv_u, 1.0);
}

// Exponential maxima: f_n - g changes sign once, at r, so the total variation
// equals |F_n(r) - Lambda(r)| with F_n(x) = (1 - e^{-x}/n)^n in closed form.
TEST(ScheffeTv, ExponentialAgainstCrossingPoint) {
    for (std::size_t n : {10u, 100u, 1000u}) {
        const double nn = static_cast<double>(n);
        auto Fn = [&](double x) { return x <= -std::log(nn) ? 0.0 : std::pow(1.0 - std::exp(-x) / nn, nn); };
        auto fn = [&](double x) { return nn * std::pow(1.0 - std::exp(-x) / nn, nn - 1.0) * std::exp(-x) / nn; };
        auto g = [](double x) { return std::exp(-x - std::exp(-x)); };
        // f_n < g to the left of the crossing, f_n > g to the right.
        double lo = -std::log(nn) + 1e-9, hi = 10.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (fn(mid) < g(mid) ? lo : hi) = mid;
        }
        const double ref = std::abs(Fn(lo) - std::exp(-std::exp(-lo)));
        EXPECT_NEAR(scheffe_tv(make_exponential(), 0.0, n), ref, 1e-9 + 1e-6 * ref) << n;
    }
}

TEST(Malmquist, SingleForcedUniform) {
    const auto r = malmquist_from_uniforms({std::exp(-2.0)});
    ASSERT_EQ(r.spacings.size(), 1u);
    EXPECT_NEAR(r.spacings[0], 2.0, 1e-15);
    EXPECT_FALSE(r.pass.has_value());
}

TEST(Malmquist, SpacingsNonNegative) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        for (std::size_t n : {1u, 2u, 17u, 500u}) {
            const auto r = malmquist_spacings(n, seed);
            ASSERT_EQ(r.spacings.size(), n);
            for (double s : r.spacings) ASSERT_GE(s, 0.0);
        }
    }
}

TEST(Malmquist, PassFlagSemantics) {
    const auto small = malmquist_spacings(49, 3);
    EXPECT_FALSE(small.pass.has_value());
    const auto big = malmquist_spacings(1000, 42);
    ASSERT_TRUE(big.pass.has_value());
    EXPECT_EQ(*big.pass, big.ks_statistic <= big.threshold);
    EXPECT_NEAR(big.threshold, 1.36 / std::sqrt(1000.0), 1e-15);
    EXPECT_TRUE(*big.pass);
}

TEST(Malmquist, MeanSpacingIsOne) {
    for (std::uint64_t seed : {1u, 42u, 2024u}) {
        const auto r = malmquist_spacings(10000, seed);
        const double m = mean(r.spacings);
        EXPECT_GE(m, 0.97) << seed;
        EXPECT_LE(m, 1.03) << seed;
    }
}

TEST(Malmquist, Errors) {
    EXPECT_THROW(malmquist_spacings(0, 1), InvalidParameter);
    EXPECT_THROW(malmquist_from_uniforms({}), InvalidParameter);
}
