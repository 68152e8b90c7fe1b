#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spatnet::stats {

struct Sample {
    std::string label;
    std::vector<double> values;
};

struct Correlation {
    double r = 0.0;
    double p = 1.0;  ///< two-sided, t-test with n - 2 degrees of freedom
    std::size_t n = 0;
};

/// Product-moment correlation. Needs n >= 3 equal-length samples; throws
/// UndefinedMetric when either sample has zero variance.
Correlation pearson(std::span<const double> x, std::span<const double> y);

struct AnovaResult {
    double f = 0.0;
    double p = 1.0;
    double eta_squared = 0.0;
    bool infinite_f = false;  ///< within-group variance is zero
    double ss_between = 0.0;
    double ss_within = 0.0;
    std::size_t df_between = 0;
    std::size_t df_within = 0;
};

/// One-way ANOVA. Needs >= 2 groups of >= 2 values each.
AnovaResult anova_oneway(std::span<const Sample> groups);

/// I_x(a, b) by continued fraction (modified Lentz), 1e-12 tolerance,
/// at most 500 iterations.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value of Student's t.
double student_t_two_sided(double t, double df);
/// Upper tail P(F > f) for F(d1, d2).
double f_distribution_upper(double f, double d1, double d2);

}  // namespace spatnet::stats
