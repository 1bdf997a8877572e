#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "refracto/csv.hpp"
#include "refracto/errors.hpp"
#include "refracto/stats.hpp"

using namespace refracto;

namespace {

io::CsvTable table1() { return io::read_csv(std::string(FIXTURES_DIR) + "/table1.csv"); }

// Paired-test reference computed straight from the textbook formulas in
// extended precision.
struct PairedOracle {
    long double mean_diff, sd_diff, t, cohens_d;
};

PairedOracle paired_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    long double sum = 0;
    for (std::size_t i = 0; i < n; ++i)
        sum += static_cast<long double>(a[i]) - b[i];
    const long double mean = sum / n;
    long double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double d = static_cast<long double>(a[i]) - b[i] - mean;
        ss += d * d;
    }
    const long double sd = std::sqrt(ss / (n - 1));
    return {mean, sd, mean / (sd / std::sqrt(static_cast<long double>(n))), mean / sd};
}

// Adaptive Simpson integration of the t density, an implementation-independent
// route to the CDF.
double t_pdf(double x, double df) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) /
                     std::sqrt(df * std::numbers::pi);
    return c * std::pow(1 + x * x / df, -(df + 1) / 2);
}

double simpson(double a, double b, double df, int depth) {
    const double m = (a + b) / 2;
    const double h = (b - a) / 6;
    const double whole = h * (t_pdf(a, df) + 4 * t_pdf(m, df) + t_pdf(b, df));
    if (depth <= 0)
        return whole;
    const double l = (a + m) / 2, r = (m + b) / 2;
    const double left = (m - a) / 6 * (t_pdf(a, df) + 4 * t_pdf(l, df) + t_pdf(m, df));
    const double right = (b - m) / 6 * (t_pdf(m, df) + 4 * t_pdf(r, df) + t_pdf(b, df));
    if (std::abs(left + right - whole) < 1e-13)
        return left + right;
    return simpson(a, m, df, depth - 1) + simpson(m, b, df, depth - 1);
}

double t_cdf_quadrature(double t, double df) {
    if (t < 0)
        return 1.0 - t_cdf_quadrature(-t, df);
    return 0.5 + simpson(0.0, t, df, 40);
}

// 50 samples with mean exactly 7.2 and sample sd exactly 0.1.
std::vector<double> repeatability_sample() {
    std::vector<double> xs;
    const double a = 0.1 * std::sqrt(49.0 / 50.0);
    for (int i = 0; i < 25; ++i) {
        xs.push_back(7.2 - a);
        xs.push_back(7.2 + a);
    }
    return xs;
}

} // namespace

TEST_CASE("mean_sd: fixture columns reproduce the published means") {
    const auto t = table1();
    REQUIRE(t.columns.size() == 3);
    REQUIRE(t.rows() == 19);
    const auto std_col = stats::mean_sd(t.columns[1]);
    const auto proto_col = stats::mean_sd(t.columns[2]);
    CHECK(std::abs(std_col.mean - 19.57) <= 0.01);
    CHECK(std::abs(proto_col.mean - 19.45) <= 0.01);
    CHECK(std::abs(std_col.sd - 20.25) <= 0.01);
    CHECK(std::abs(proto_col.sd - 20.09) <= 0.01);

    const std::vector<double> c{3.5, 3.5, 3.5};
    const auto cs = stats::mean_sd(c);
    CHECK(cs.mean == 3.5);
    CHECK(cs.sd == 0.0);
    CHECK_THROWS_AS(stats::mean_sd(std::vector<double>{1.0}), SizeError);
}

TEST_CASE("rsd_percent") {
    CHECK(stats::rsd_percent(std::vector<double>{4.2, 4.2, 4.2}) == 0.0);
    CHECK(stats::rsd_percent(std::vector<double>{9, 10, 11}) ==
          doctest::Approx(10.0).epsilon(1e-12));
    CHECK_THROWS_AS(stats::rsd_percent(std::vector<double>{-1.0, 1.0}), DomainError);

    std::mt19937_64 gen(3);
    std::vector<double> xs(40);
    for (double& x : xs)
        x = 5.0 + static_cast<double>(gen() >> 11) * 0x1.0p-53;
    const auto [m, s] = stats::mean_sd(xs);
    CHECK(std::abs(stats::rsd_percent(xs) - 100.0 * s / std::abs(m)) < 1e-12);
}

TEST_CASE("confidence_interval: repeatability case rounds to (7.17, 7.23)") {
    const auto xs = repeatability_sample();
    const auto [m, s] = stats::mean_sd(xs);
    CHECK(m == doctest::Approx(7.2).epsilon(1e-12));
    CHECK(s == doctest::Approx(0.1).epsilon(1e-12));

    const auto ci = stats::confidence_interval(xs, 0.95);
    CHECK(std::round(ci.low * 100.0) / 100.0 == 7.17);
    CHECK(std::round(ci.high * 100.0) / 100.0 == 7.23);

    const auto ci2 = stats::confidence_interval(7.2, 0.1, 50, 0.95);
    CHECK(ci2.low == doctest::Approx(ci.low).epsilon(1e-9));
    CHECK(ci2.high == doctest::Approx(ci.high).epsilon(1e-9));

    const std::vector<double> flat{2.0, 2.0, 2.0};
    const auto ci3 = stats::confidence_interval(flat, 0.95);
    CHECK(ci3.low == 2.0);
    CHECK(ci3.high == 2.0);
}

TEST_CASE("confidence_interval: Monte-Carlo coverage near 95%") {
    std::mt19937_64 gen(202);
    std::normal_distribution<double> dist(10.0, 2.0);
    int covered = 0;
    const int reps = 1000;
    std::vector<double> xs(1000);
    for (int r = 0; r < reps; ++r) {
        for (double& x : xs)
            x = dist(gen);
        const auto ci = stats::confidence_interval(xs, 0.95);
        if (ci.low <= 10.0 && 10.0 <= ci.high)
            ++covered;
    }
    CHECK(covered >= 930);
    CHECK(covered <= 970);
}

TEST_CASE("confidence_interval: width shrinks as 1/sqrt(n)") {
    // Fixed sd, growing n: width = 2 t_q(n-1) sd / sqrt(n).
    auto width_for = [](int n) {
        const auto ci = stats::confidence_interval(5.0, 0.35, n, 0.95);
        return ci.high - ci.low;
    };
    const double w10 = width_for(10), w40 = width_for(40), w160 = width_for(160);
    CHECK(w40 < w10);
    CHECK(w160 < w40);
    // ratio approaches exactly 2 as the t quantile settles
    CHECK(w10 / w40 == doctest::Approx(2.0).epsilon(0.15));
    CHECK(w40 / w160 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("paired_t_test: Tables 3-4 reproduction from the fixture") {
    const auto t = table1();
    const auto r = stats::paired_t_test(t.columns[1], t.columns[2], 0.95);
    CHECK(r.df == 18);
    CHECK(std::abs(r.t_value - 0.652) <= 0.005);
    CHECK(std::abs(r.p_two_sided - 0.522) <= 0.01);
    CHECK(std::abs(r.sd_diff - 0.823) <= 0.002);
    CHECK(std::abs(r.cohens_d - 0.150) <= 0.002);
    CHECK(std::abs(r.ci_low - (-0.27)) <= 0.01);
    CHECK(std::abs(r.ci_high - 0.52) <= 0.01);
    CHECK(std::abs(r.mean_diff - 0.12) <= 0.005);
}

TEST_CASE("paired_t_test: identical pairs convention") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const auto r = stats::paired_t_test(a, a, 0.95);
    CHECK(r.t_value == 0.0);
    CHECK(r.p_two_sided == 1.0);
    CHECK(r.cohens_d == 0.0);
    CHECK(r.ci_low == 0.0);
    CHECK(r.ci_high == 0.0);
}

TEST_CASE("paired_t_test: matches the extended-precision oracle") {
    std::mt19937_64 gen(77);
    auto u = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (int rep = 0; rep < 25; ++rep) {
        const std::size_t n = 5 + static_cast<std::size_t>(gen() % 60);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = 10.0 * u();
            b[i] = a[i] + 0.5 * (u() - 0.45);
        }
        const auto r = stats::paired_t_test(a, b, 0.95);
        const auto o = paired_oracle(a, b);
        CHECK(std::abs(r.mean_diff - static_cast<double>(o.mean_diff)) < 1e-9);
        CHECK(std::abs(r.sd_diff - static_cast<double>(o.sd_diff)) < 1e-9);
        CHECK(std::abs(r.t_value - static_cast<double>(o.t)) < 1e-9);
        CHECK(std::abs(r.cohens_d - static_cast<double>(o.cohens_d)) < 1e-9);
        // p agrees with the quadrature route
        const double p_ref =
            2.0 * (1.0 - t_cdf_quadrature(std::abs(r.t_value), static_cast<double>(n - 1)));
        CHECK(std::abs(r.p_two_sided - p_ref) < 1e-8);
    }
    CHECK_THROWS_AS(stats::paired_t_test(std::vector<double>{1, 2}, std::vector<double>{1}, 0.95),
                    SizeError);
}

TEST_CASE("paired_t_test: scale and shift invariance") {
    const auto t = table1();
    const auto base = stats::paired_t_test(t.columns[1], t.columns[2], 0.95);

    std::vector<double> a = t.columns[1], b = t.columns[2];
    for (auto& x : a)
        x = 3.7 * x;
    for (auto& x : b)
        x = 3.7 * x;
    const auto scaled = stats::paired_t_test(a, b, 0.95);
    CHECK(scaled.t_value == doctest::Approx(base.t_value).epsilon(1e-12));
    CHECK(scaled.p_two_sided == doctest::Approx(base.p_two_sided).epsilon(1e-9));
    CHECK(scaled.cohens_d == doctest::Approx(base.cohens_d).epsilon(1e-12));
    CHECK(scaled.df == base.df);

    a = t.columns[1];
    b = t.columns[2];
    for (auto& x : a)
        x += 12.5;
    for (auto& x : b)
        x += 12.5;
    const auto shifted = stats::paired_t_test(a, b, 0.95);
    CHECK(shifted.t_value == doctest::Approx(base.t_value).epsilon(1e-9));
    CHECK(shifted.mean_diff == doctest::Approx(base.mean_diff).epsilon(1e-9));
    CHECK(shifted.sd_diff == doctest::Approx(base.sd_diff).epsilon(1e-9));
    CHECK(shifted.ci_low == doctest::Approx(base.ci_low).epsilon(1e-9));
}

TEST_CASE("pearson_r: closed forms, fixture bound, invariance") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y(5);
    for (std::size_t i = 0; i < 5; ++i)
        y[i] = 2.0 * x[i] + 3.0;
    CHECK(stats::pearson_r(x, y) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < 5; ++i)
        y[i] = -x[i];
    CHECK(stats::pearson_r(x, y) == doctest::Approx(-1.0).epsilon(1e-12));

    const auto t = table1();
    CHECK(stats::pearson_r(t.columns[1], t.columns[2]) >= 0.998);

    // invariant under positive affine transforms
    std::vector<double> a = t.columns[1];
    for (auto& v : a)
        v = 0.4 * v + 7.0;
    CHECK(stats::pearson_r(a, t.columns[2]) ==
          doctest::Approx(stats::pearson_r(t.columns[1], t.columns[2])).epsilon(1e-12));

    const std::vector<double> flat{1, 1, 1};
    CHECK_THROWS_AS(stats::pearson_r(flat, x), SizeError); // length mismatch first
    CHECK_THROWS_AS(stats::pearson_r(flat, std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("student_t_cdf: closed forms, symmetry, quadrature oracle") {
    CHECK(stats::student_t_cdf(0.0, 7.0) == 0.5);
    // df = 1 is Cauchy: F(t) = 1/2 + atan(t)/pi
    CHECK(stats::student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(stats::student_t_cdf(-2.5, 1.0) ==
          doctest::Approx(0.5 + std::atan(-2.5) / std::numbers::pi).epsilon(1e-9));
    CHECK(std::abs(stats::student_t_cdf(0.652, 18.0) - 0.739) <= 0.005);

    for (const double df : {1.0, 2.0, 5.0, 18.0, 49.0, 200.0}) {
        for (const double t : {-3.0, -0.652, 0.1, 0.652, 1.5, 4.0}) {
            CHECK(std::abs(stats::student_t_cdf(t, df) + stats::student_t_cdf(-t, df) - 1.0) <
                  1e-9);
            CHECK(std::abs(stats::student_t_cdf(t, df) - t_cdf_quadrature(t, df)) < 1e-9);
        }
    }
    CHECK_THROWS_AS(stats::student_t_cdf(1.0, 0.5), DomainError);
}

TEST_CASE("student_t_quantile inverts the CDF") {
    for (const double df : {1.0, 9.0, 18.0, 49.0}) {
        for (const double p : {0.6, 0.9, 0.975, 0.995}) {
            const double q = stats::student_t_quantile(p, df);
            CHECK(std::abs(stats::student_t_cdf(q, df) - p) < 1e-9);
        }
    }
    CHECK(stats::student_t_quantile(0.975, 18.0) == doctest::Approx(2.10092).epsilon(1e-4));
}
