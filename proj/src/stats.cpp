#include "spatnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spatnet/error.hpp"

namespace spatnet::stats {

namespace {

constexpr double kTolerance = 1e-12;
constexpr int kMaxIterations = 500;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kTolerance) return h;
    }
    throw UndefinedMetric("incomplete beta continued fraction did not converge");
}

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ContractError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw ContractError("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw ContractError("t distribution needs df > 0");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double f_distribution_upper(double f, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0)) throw ContractError("F distribution needs d1, d2 > 0");
    if (std::isinf(f)) return 0.0;
    if (f <= 0.0) return 1.0;
    return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ContractError("pearson needs equal-length samples, got " +
                            std::to_string(x.size()) + " and " + std::to_string(y.size()));
    }
    if (x.size() < 3) throw ContractError("pearson needs at least 3 pairs");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedMetric("pearson undefined for a constant sample");

    Correlation c;
    c.n = x.size();
    c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = static_cast<double>(c.n - 2);
    const double rest = 1.0 - c.r * c.r;
    if (rest <= 0.0) {
        c.p = 0.0;
    } else {
        c.p = student_t_two_sided(c.r * std::sqrt(df / rest), df);
    }
    return c;
}

AnovaResult anova_oneway(std::span<const Sample> groups) {
    if (groups.size() < 2) throw ContractError("anova needs at least 2 groups");
    std::size_t total_n = 0;
    double grand_sum = 0.0;
    for (const auto& g : groups) {
        if (g.values.size() < 2) {
            throw ContractError("anova group '" + g.label + "' has fewer than 2 values");
        }
        total_n += g.values.size();
        grand_sum += std::accumulate(g.values.begin(), g.values.end(), 0.0);
    }
    const double grand_mean = grand_sum / static_cast<double>(total_n);

    AnovaResult r;
    for (const auto& g : groups) {
        const double m = mean(g.values);
        r.ss_between += static_cast<double>(g.values.size()) * (m - grand_mean) * (m - grand_mean);
        for (double v : g.values) r.ss_within += (v - m) * (v - m);
    }
    r.df_between = groups.size() - 1;
    r.df_within = total_n - groups.size();

    if (r.ss_between == 0.0) {
        r.f = 0.0;
        r.p = 1.0;
        r.eta_squared = 0.0;
        return r;
    }
    if (r.ss_within == 0.0) {
        r.f = std::numeric_limits<double>::infinity();
        r.infinite_f = true;
        r.p = 0.0;
        r.eta_squared = 1.0;
        return r;
    }
    const double ms_between = r.ss_between / static_cast<double>(r.df_between);
    const double ms_within = r.ss_within / static_cast<double>(r.df_within);
    r.f = ms_between / ms_within;
    r.p = f_distribution_upper(r.f, static_cast<double>(r.df_between),
                               static_cast<double>(r.df_within));
    r.eta_squared = r.ss_between / (r.ss_between + r.ss_within);
    return r;
}

}  // namespace spatnet::stats
