#include "refracto/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "refracto/errors.hpp"

namespace refracto::stats {

MeanSd mean_sd(std::span<const double> xs) {
    if (xs.size() < 2)
        throw SizeError("mean_sd: need at least two samples");
    double sum = 0.0;
    for (const double x : xs)
        sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (const double x : xs)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0))};
}

double rsd_percent(std::span<const double> xs) {
    const auto [mean, sd] = mean_sd(xs);
    if (mean == 0.0)
        throw DomainError("rsd_percent: undefined for zero mean");
    return 100.0 * sd / std::abs(mean);
}

Interval confidence_interval(double mean, double sd, int n, double level) {
    if (n < 2)
        throw SizeError("confidence_interval: need at least two samples");
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence_interval: level outside (0, 1)");
    if (sd == 0.0)
        return {mean, mean};
    const double tq = student_t_quantile((1.0 + level) / 2.0, static_cast<double>(n - 1));
    const double half = tq * sd / std::sqrt(static_cast<double>(n));
    return {mean - half, mean + half};
}

Interval confidence_interval(std::span<const double> xs, double level) {
    const auto [mean, sd] = mean_sd(xs);
    return confidence_interval(mean, sd, static_cast<int>(xs.size()), level);
}

PairedTestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                               double level) {
    if (a.size() != b.size())
        throw SizeError("paired_t_test: sample lists differ in length");
    if (a.size() < 2)
        throw SizeError("paired_t_test: need at least two pairs");
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("paired_t_test: level outside (0, 1)");

    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = a[i] - b[i];

    PairedTestResult r;
    const auto ma = mean_sd(a);
    const auto mb = mean_sd(b);
    const auto md = mean_sd(d);
    r.mean_a = ma.mean;
    r.mean_b = mb.mean;
    r.sd_a = ma.sd;
    r.sd_b = mb.sd;
    r.mean_diff = md.mean;
    r.sd_diff = md.sd;
    r.df = static_cast<int>(a.size()) - 1;

    const double n = static_cast<double>(a.size());
    if (md.sd == 0.0) {
        // All differences identical: t is 0/0 or +-inf depending on the mean.
        if (md.mean == 0.0) {
            r.t_value = 0.0;
            r.p_two_sided = 1.0;
            r.cohens_d = 0.0;
        } else {
            r.t_value = std::copysign(std::numeric_limits<double>::infinity(), md.mean);
            r.p_two_sided = 0.0;
            r.cohens_d = r.t_value;
        }
        r.ci_low = r.ci_high = md.mean;
        return r;
    }

    const double se = md.sd / std::sqrt(n);
    r.t_value = md.mean / se;
    r.cohens_d = md.mean / md.sd;
    r.p_two_sided = 2.0 * (1.0 - student_t_cdf(std::abs(r.t_value), static_cast<double>(r.df)));
    const double tq = student_t_quantile((1.0 + level) / 2.0, static_cast<double>(r.df));
    r.ci_low = md.mean - tq * se;
    r.ci_high = md.mean + tq * se;
    return r;
}

double pearson_r(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw SizeError("pearson_r: sample lists differ in length");
    if (a.size() < 2)
        throw SizeError("pearson_r: need at least two pairs");

    const auto ma = mean_sd(a);
    const auto mb = mean_sd(b);
    if (ma.sd == 0.0 || mb.sd == 0.0)
        throw DomainError("pearson_r: undefined for zero variance");

    double sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sab += (a[i] - ma.mean) * (b[i] - mb.mean);
    const double n1 = static_cast<double>(a.size()) - 1.0;
    return std::clamp(sab / (n1 * ma.sd * mb.sd), -1.0, 1.0);
}

namespace {

constexpr double kBetaCfTolerance = 1e-12;

// Continued fraction for I_x(a,b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;

    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= 500; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kBetaCfTolerance)
            break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("incomplete beta: parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("incomplete beta: x outside [0, 1]");
    if (x == 0.0)
        return 0.0;
    if (x == 1.0)
        return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    // Use the symmetry that keeps the continued fraction fast-converging.
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * beta_continued_fraction(a, b, x) / a;
    return 1.0 - std::exp(ln_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df >= 1.0))
        throw DomainError("student_t_cdf: df must be at least 1");
    if (t == 0.0)
        return 0.5;
    const double x = df / (df + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("student_t_quantile: p outside (0, 1)");
    if (p == 0.5)
        return 0.0;

    // Bisection; the CDF is monotone and cheap.
    double lo = -1.0, hi = 1.0;
    while (student_t_cdf(lo, df) > p)
        lo *= 2.0;
    while (student_t_cdf(hi, df) < p)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        if (student_t_cdf(mid, df) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace refracto::stats
