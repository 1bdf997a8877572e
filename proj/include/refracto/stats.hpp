#pragma once

#include <span>

namespace refracto::stats {

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0; ///< sample standard deviation (n - 1 denominator)
};

/// Throws SizeError for n < 2.
MeanSd mean_sd(std::span<const double> xs);

/// 100 * sd / |mean|. Throws DomainError when the mean is zero.
double rsd_percent(std::span<const double> xs);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// mean +- t_{(1+level)/2, n-1} * sd / sqrt(n).
Interval confidence_interval(std::span<const double> xs, double level);

/// Same interval from summary statistics.
Interval confidence_interval(double mean, double sd, int n, double level);

struct PairedTestResult {
    double mean_a = 0.0;
    double mean_b = 0.0;
    double sd_a = 0.0;
    double sd_b = 0.0;
    double mean_diff = 0.0;
    double sd_diff = 0.0;
    double t_value = 0.0;
    int df = 0;
    double p_two_sided = 1.0;
    double cohens_d = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// Paired t-test on d_i = a_i - b_i with t = mean(d) / (sd(d)/sqrt(n)),
/// two-sided p, Cohen's d = mean(d)/sd(d), and the CI on the mean
/// difference at the given level.
///
/// Degenerate pairs (sd_diff = 0): with mean_diff = 0 this reports t = 0,
/// p = 1, d = 0; otherwise t and d are +-infinity with p = 0 and a
/// zero-width CI at mean_diff.
PairedTestResult paired_t_test(std::span<const double> a, std::span<const double> b,
                               double level);

/// Product-moment correlation. Throws DomainError when either variance is zero.
double pearson_r(std::span<const double> a, std::span<const double> b);

/// Student-t CDF via the regularized incomplete beta function; absolute
/// error <= 1e-9. Throws DomainError for df < 1.
double student_t_cdf(double t, double df);

/// Inverse of student_t_cdf (bisection), for CI quantiles.
double student_t_quantile(double p, double df);

/// I_x(a, b), evaluated by Lentz's continued fraction to 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

} // namespace refracto::stats
