#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "oracles.hpp"
#include "spatnet/error.hpp"
#include "spatnet/stats.hpp"

using namespace spatnet;
using namespace spatnet::stats;

TEST_CASE("incomplete beta matches Boost across the domain") {
    for (double a : {0.5, 1.0, 2.5, 7.0, 30.0, 200.0})
        for (double b : {0.5, 1.0, 3.0, 12.0, 150.0})
            for (double x : {1e-6, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0 - 1e-6}) {
                const double ref = boost::math::ibeta(a, b, x);
                CHECK(regularized_incomplete_beta(a, b, x) == doctest::Approx(ref).epsilon(1e-10));
            }
    CHECK(regularized_incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2, 3, 1.0) == 1.0);
    CHECK(regularized_incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3));
    CHECK_THROWS_AS(regularized_incomplete_beta(0, 1, 0.5), ContractError);
    CHECK_THROWS_AS(regularized_incomplete_beta(1, 1, 1.5), ContractError);
}

TEST_CASE("distribution tails match Boost") {
    for (double df : {1.0, 3.0, 13.0, 98.0})
        for (double t : {0.0, 0.4, 1.96, 4.0, -2.5}) {
            const boost::math::students_t dist(df);
            const double ref = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
            CHECK(student_t_two_sided(t, df) == doctest::Approx(ref).epsilon(1e-10));
        }
    for (double d1 : {1.0, 2.0, 5.0})
        for (double d2 : {3.0, 12.0, 87.0})
            for (double f : {0.1, 1.0, 3.7, 25.0}) {
                const boost::math::fisher_f dist(d1, d2);
                const double ref = boost::math::cdf(boost::math::complement(dist, f));
                CHECK(f_distribution_upper(f, d1, d2) == doctest::Approx(ref).epsilon(1e-10));
            }
    CHECK(f_distribution_upper(0.0, 2, 5) == 1.0);
}

TEST_CASE("pearson against the raw-sum formula") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + trial * 3;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = noise(rng);
            y[i] = (trial % 3 - 1) * 0.7 * x[i] + noise(rng);
        }
        const auto c = pearson(x, y);
        CHECK(c.n == n);
        CHECK(c.r == doctest::Approx(oracle::pearson_r(x, y)).epsilon(1e-6));
        const double df = double(n - 2);
        const double t = c.r * std::sqrt(df / (1.0 - c.r * c.r));
        const double ref = 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(df), std::fabs(t)));
        CHECK(c.p == doctest::Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("pearson edge cases") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(pearson(x, std::vector<double>{2, 4, 6, 8}).r == doctest::Approx(1.0));
    CHECK(pearson(x, std::vector<double>{2, 4, 6, 8}).p == 0.0);
    CHECK(pearson(x, std::vector<double>{8, 6, 4, 2}).r == doctest::Approx(-1.0));
    CHECK_THROWS_AS(pearson(x, std::vector<double>{5, 5, 5, 5}), UndefinedMetric);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2, 3}), ContractError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ContractError);
}

TEST_CASE("one-way ANOVA against the total-minus-within decomposition") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t groups = 2 + trial % 4;
        std::vector<Sample> samples;
        std::vector<std::vector<double>> raw;
        for (std::size_t g = 0; g < groups; ++g) {
            std::vector<double> v(2 + (trial + g) % 6);
            for (auto& x : v) x = noise(rng) + 0.3 * double(g) * (trial % 2);
            samples.push_back({"g" + std::to_string(g), v});
            raw.push_back(v);
        }
        const auto a = anova_oneway(samples);
        const auto ref = oracle::anova(raw);
        CHECK(a.f == doctest::Approx(ref.f).epsilon(1e-6));
        CHECK(a.eta_squared == doctest::Approx(ref.eta_squared).epsilon(1e-6));
        const boost::math::fisher_f dist(double(a.df_between), double(a.df_within));
        CHECK(a.p == doctest::Approx(boost::math::cdf(boost::math::complement(dist, a.f))).epsilon(1e-6));
        CHECK_FALSE(a.infinite_f);
    }
}

TEST_CASE("ANOVA degenerate variance rules") {
    const std::vector<Sample> equal{{"a", {1, 2, 3}}, {"b", {3, 2, 1}}};
    const auto same = anova_oneway(equal);
    CHECK(same.f == 0.0);
    CHECK(same.p == 1.0);
    CHECK(same.eta_squared == 0.0);

    const std::vector<Sample> constant{{"a", {1, 1}}, {"b", {4, 4, 4}}};
    const auto split = anova_oneway(constant);
    CHECK(split.infinite_f);
    CHECK(std::isinf(split.f));
    CHECK(split.p == 0.0);
    CHECK(split.eta_squared == 1.0);

    CHECK_THROWS_AS(anova_oneway(std::vector<Sample>{{"a", {1, 2}}}), ContractError);
    CHECK_THROWS_AS(anova_oneway(std::vector<Sample>{{"a", {1, 2}}, {"b", {3}}}), ContractError);
}
