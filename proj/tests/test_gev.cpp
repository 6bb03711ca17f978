#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "evt/gev.hpp"
#include "oracles.hpp"

using namespace evt;

namespace {

const double kE = std::numbers::e;

double gumbel_inv(double u) { return -std::log(-std::log(u)); }

}  // namespace

TEST(GevCdf, Examples) {
    EXPECT_NEAR(gev_cdf({0.0, 0.0, 1.0}, 0.0), 1.0 / kE, 1e-16);
    EXPECT_NEAR(gev_cdf({1.0, 0.0, 1.0}, 0.0), 1.0 / kE, 1e-16);
    EXPECT_EQ(gev_cdf({1.0, 0.0, 1.0}, -1.5), 0.0);
}

TEST(GevCdf, WeibullUpperEndpointIsExactlyOne) {
    const GevParams p{-0.5, 0.0, 1.0};
    EXPECT_EQ(gev_cdf(p, 2.0), 1.0);
    EXPECT_EQ(gev_cdf(p, 3.0), 1.0);
    EXPECT_LT(gev_cdf(p, 1.999), 1.0);
    EXPECT_EQ(gev_sf(p, 2.0), 0.0);
}

TEST(GevCdf, ZeroIsAnchorForEveryGamma) {
    for (double g = -2.0; g <= 2.0; g += 0.125) EXPECT_NEAR(gev_cdf({g, 0.0, 1.0}, 0.0), 1.0 / kE, 1e-15) << g;
}

TEST(GevCdf, ContinuityInGamma) {
    for (double g : {1e-8, -1e-8, 1e-10, -1e-12}) {
        for (double x = -20.0; x <= 20.0; x += 0.25) {
            ASSERT_NEAR(gev_cdf({g, 0.0, 1.0}, x), gev_cdf({0.0, 0.0, 1.0}, x), 1e-6) << g << " " << x;
        }
    }
}

TEST(GevCdf, LocationScale) {
    const GevParams p{0.3, 2.0, 3.0};
    for (double x : {-1.0, 0.5, 2.0, 10.0}) EXPECT_NEAR(gev_cdf(p, x), gev_cdf({0.3, 0.0, 1.0}, (x - 2.0) / 3.0), 1e-15);
    EXPECT_THROW(gev_cdf({0.3, 0.0, 0.0}, 1.0), InvalidParameter);
}

TEST(GevPdf, Examples) {
    EXPECT_NEAR(gev_pdf({0.0, 0.0, 1.0}, 0.0), 1.0 / kE, 1e-16);
    EXPECT_EQ(gev_pdf({0.5, 0.0, 1.0}, -2.5), 0.0);
    EXPECT_EQ(gev_pdf({-0.5, 0.0, 1.0}, 2.5), 0.0);
}

TEST(GevPdf, IntegratesToOne) {
    const double inf = std::numeric_limits<double>::infinity();
    {
        const GevParams p{-0.5, 0.0, 1.0};  // support (-inf, 2]
        const double v = oracle::integrate([&](double x) { return gev_pdf(p, x); }, -inf, 2.0);
        EXPECT_NEAR(v, 1.0, 1e-8);
    }
    {
        const GevParams p{0.0, 0.0, 1.0};
        const double v = oracle::integrate([&](double x) { return gev_pdf(p, x); }, -inf, inf);
        EXPECT_NEAR(v, 1.0, 1e-8);
    }
    {
        const GevParams p{0.5, 0.0, 1.0};  // support [-2, inf)
        const double v = oracle::integrate([&](double x) { return gev_pdf(p, x); }, -2.0, inf);
        EXPECT_NEAR(v, 1.0, 1e-8);
    }
}

TEST(GevPdf, MatchesDerivativeOfCdf) {
    for (double g : {-0.5, 0.0, 0.5}) {
        const GevParams p{g, 0.0, 1.0};
        for (double x : {-1.0, 0.0, 0.7, 1.5}) {
            const double h = 1e-5;
            const double fd = (gev_cdf(p, x + h) - gev_cdf(p, x - h)) / (2 * h);
            EXPECT_NEAR(gev_pdf(p, x), fd, 1e-8) << g << " " << x;
            const double fd2 = (gev_pdf(p, x + h) - gev_pdf(p, x - h)) / (2 * h);
            EXPECT_NEAR(gev_pdf_derivative(p, x), fd2, 1e-7) << g << " " << x;
        }
    }
}

TEST(GevQuantile, Examples) {
    EXPECT_NEAR(gev_quantile({0.0, 0.0, 1.0}, 1.0 / kE), 0.0, 1e-15);
    EXPECT_NEAR(gev_quantile({1.0, 0.0, 1.0}, 1.0 / kE), 0.0, 1e-15);
    EXPECT_NEAR(gev_quantile({0.0, 0.0, 1.0}, std::exp(-kE)), -1.0, 1e-15);
    EXPECT_THROW(gev_quantile({0.0, 0.0, 1.0}, 0.0), DomainError);
    EXPECT_THROW(gev_quantile({0.0, 0.0, 1.0}, 1.0), DomainError);
}

TEST(GevQuantile, InvertsCdf) {
    for (double g : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const GevParams p{g, 0.0, 1.0};
        for (int k = 1; k <= 99; ++k) {
            const double u = k / 100.0;
            ASSERT_NEAR(gev_cdf(p, gev_quantile(p, u)), u, 1e-10) << g << " " << u;
            ASSERT_NEAR(gev_upper_quantile(p, 1.0 - u), gev_quantile(p, u), 1e-12 * std::max(1.0, std::abs(gev_quantile(p, u))));
        }
    }
}

TEST(ClassicFromGev, Examples) {
    const auto f = classic_from_gev(0.5);
    EXPECT_EQ(f.type, ClassicType::frechet);
    EXPECT_DOUBLE_EQ(f.index, 2.0);
    EXPECT_DOUBLE_EQ(f.relation.A, 0.5);
    EXPECT_DOUBLE_EQ(f.relation.B, 1.0);

    const auto w = classic_from_gev(-1.0);
    EXPECT_EQ(w.type, ClassicType::weibull);
    EXPECT_DOUBLE_EQ(w.index, 1.0);
    EXPECT_DOUBLE_EQ(w.relation.A, 1.0);
    EXPECT_DOUBLE_EQ(w.relation.B, -1.0);

    const auto g = classic_from_gev(0.0);
    EXPECT_EQ(g.type, ClassicType::gumbel);
    EXPECT_DOUBLE_EQ(g.relation.A, 1.0);
    EXPECT_DOUBLE_EQ(g.relation.B, 0.0);
}

TEST(ClassicFromGev, PointwiseReconstruction) {
    for (double gamma : {-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0}) {
        const auto form = classic_from_gev(gamma);
        const GevParams p{gamma, 0.0, 1.0};
        const double lo = gev_quantile(p, 1e-6), hi = gev_quantile(p, 1 - 1e-6);
        for (int i = 0; i <= 100; ++i) {
            const double x = lo + (hi - lo) * i / 100.0;
            ASSERT_NEAR(gev_cdf(p, x), form.cdf(form.relation.apply(x)), 1e-12) << gamma << " " << x;
        }
    }
}

TEST(TypeRelation, InverseAndCompose) {
    const TypeRelation r{2.5, -1.25};
    const auto id = r.compose(r.inverse());
    EXPECT_NEAR(id.A, 1.0, 1e-12);
    EXPECT_NEAR(id.B, 0.0, 1e-12);
    const auto id2 = r.inverse().compose(r);
    EXPECT_NEAR(id2.A, 1.0, 1e-12);
    EXPECT_NEAR(id2.B, 0.0, 1e-12);
    EXPECT_NEAR(r.inverse().apply(r.apply(3.7)), 3.7, 1e-12);
}

TEST(TypeParamsFromQuantiles, RecoversAffineMaps) {
    const double u1 = std::exp(-kE), u2 = std::exp(-1.0 / kE);
    struct Case { double A, B; };
    for (const Case c : {Case{2.0, 3.0}, Case{5.0, 0.0}, Case{1.0, 0.0}}) {
        // G(x) = Lambda(A x + B)  =>  G^{-1}(u) = (Lambda^{-1}(u) - B) / A.
        auto g_inv = [c](double u) { return (gumbel_inv(u) - c.B) / c.A; };
        const auto r = type_params_from_quantiles(gumbel_inv, g_inv, u1, u2);
        EXPECT_NEAR(r.A, c.A, 1e-9);
        EXPECT_NEAR(r.B, c.B, 1e-9);
        for (int k = 1; k <= 99; ++k) {
            const double u = k / 100.0;
            ASSERT_NEAR(gumbel_cdf(r.apply(g_inv(u))), u, 1e-9);
        }
    }
}

TEST(TypeParamsFromQuantiles, Errors) {
    auto flat = [](double) { return 1.0; };
    EXPECT_THROW(type_params_from_quantiles(flat, gumbel_inv, 0.2, 0.8), DegenerateError);
    EXPECT_THROW(type_params_from_quantiles(gumbel_inv, gumbel_inv, 0.8, 0.2), DomainError);
}

TEST(NormingLimitCheck, Examples) {
    std::vector<NormingPair> base, shifted, pareto, pareto_alt;
    for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
        const double ln = std::log(static_cast<double>(n));
        base.push_back({1.0, ln, n});
        shifted.push_back({1.0, ln + 1.0, n});
        const double r = std::sqrt(static_cast<double>(n));
        pareto.push_back({r, 0.0, n});
        pareto_alt.push_back({2.0 * r, r, n});
    }
    auto same = norming_limit_check(base, base);
    EXPECT_DOUBLE_EQ(same.A, 1.0);
    EXPECT_DOUBLE_EQ(same.B, 0.0);
    EXPECT_TRUE(same.stabilized);

    auto shift = norming_limit_check(base, shifted);
    EXPECT_DOUBLE_EQ(shift.A, 1.0);
    EXPECT_DOUBLE_EQ(shift.B, 1.0);
    EXPECT_TRUE(shift.stabilized);

    auto par = norming_limit_check(pareto, pareto_alt);
    EXPECT_DOUBLE_EQ(par.A, 2.0);
    EXPECT_DOUBLE_EQ(par.B, 1.0);
    EXPECT_TRUE(par.stabilized);
}

TEST(NormingLimitCheck, NonConvergenceIsAFlag) {
    std::vector<NormingPair> a, b;
    for (std::size_t n : {10u, 100u, 1000u, 10000u}) {
        a.push_back({1.0, 0.0, n});
        b.push_back({std::log(static_cast<double>(n)), 0.0, n});
    }
    const auto r = norming_limit_check(a, b);
    EXPECT_FALSE(r.stabilized);
    EXPECT_THROW(norming_limit_check(a, std::span<const NormingPair>(b).first(2)), InvalidParameter);
}

TEST(ClassicLimit, MatchesClassicalLaws) {
    for (double y : {-3.0, -0.5, 0.2, 1.0, 4.0}) {
        EXPECT_NEAR(gev_cdf(classic_limit(0.5), y), frechet_cdf(2.0, y), 1e-14) << y;
        EXPECT_NEAR(gev_cdf(classic_limit(-1.0), y), weibull_cdf(1.0, y), 1e-14) << y;
        EXPECT_NEAR(gev_cdf(classic_limit(-0.5), y), weibull_cdf(2.0, y), 1e-14) << y;
        EXPECT_NEAR(gev_cdf(classic_limit(0.0), y), gumbel_cdf(y), 1e-15) << y;
    }
    EXPECT_EQ(classic_limit(-1.0).upper_endpoint(), 0.0);
    EXPECT_EQ(classic_limit(0.5).lower_endpoint(), 0.0);
}
