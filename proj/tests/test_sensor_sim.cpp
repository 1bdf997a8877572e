#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refracto/errors.hpp"
#include "refracto/sensor_sim.hpp"

using namespace refracto;

namespace {

// Independent arcsine: bisection on sin over [0, pi/2] in long double.
// Deliberately avoids std::asin, which the implementation uses.
long double arcsine_oracle(long double x) {
    long double lo = 0.0L, hi = 1.5707963267948966192L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = (lo + hi) / 2.0L;
        if (std::sin(mid) < x)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2.0L;
}

double first_hundred_slope(const std::vector<double>& v) {
    const std::size_t n = 100;
    const double xbar = (n - 1) / 2.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        mean += v[i];
    mean /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (i - xbar) * (v[i] - mean);
        sxx += (i - xbar) * (i - xbar);
    }
    return sxy / sxx;
}

} // namespace

TEST_CASE("brix_to_refractive_index: fixed sucrose model") {
    CHECK(sim::brix_to_refractive_index(0.0) == doctest::Approx(1.3330).epsilon(1e-12));
    CHECK(sim::brix_to_refractive_index(10.0) == doctest::Approx(1.34727).epsilon(1e-12));
    CHECK_THROWS_AS(sim::brix_to_refractive_index(-0.01), DomainError);
    CHECK_THROWS_AS(sim::brix_to_refractive_index(85.01), DomainError);
}

TEST_CASE("brix_to_refractive_index: strictly increasing over [0, 84]") {
    for (int b = 0; b < 85; ++b)
        CHECK(sim::brix_to_refractive_index(b + 1.0) > sim::brix_to_refractive_index(b));
}

TEST_CASE("critical_angle: closed forms and oracle") {
    CHECK(sim::critical_angle(1.5, 1.5) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(sim::critical_angle(0.75, 1.5) == doctest::Approx(std::numbers::pi / 6).epsilon(1e-12));

    const double got = sim::critical_angle(1.3330, 1.51);
    const double want = static_cast<double>(arcsine_oracle(1.3330L / 1.51L));
    CHECK(std::abs(got - want) < 1e-12);

    CHECK_THROWS_AS(sim::critical_angle(1.6, 1.51), NoTotalReflectionError);
    CHECK_THROWS_AS(sim::critical_angle(-1.0, 1.51), DomainError);
    CHECK_THROWS_AS(sim::critical_angle(1.0, 0.0), DomainError);
}

TEST_CASE("boundary_pixel: affine map") {
    sim::SimGeometry geom;
    CHECK(sim::boundary_pixel(geom.theta_ref, geom) == doctest::Approx(geom.pixel_ref));

    sim::SimGeometry g2;
    g2.angle_to_pixel_slope = 2000.0;
    g2.theta_ref = 0.8;
    g2.pixel_ref = 600.0;
    CHECK(sim::boundary_pixel(0.9, g2) == doctest::Approx(800.0).epsilon(1e-12));

    g2.pixel_ref = 2400.0;
    CHECK_THROWS_AS(sim::boundary_pixel(0.9, g2), PixelRangeError);
}

TEST_CASE("boundary_pixel: strictly monotone in Brix over [0, 60]") {
    const sim::SimGeometry geom;
    double prev = -1.0;
    for (double b = 0.0; b <= 60.0; b += 0.25) {
        const double p = sim::boundary_pixel(
            sim::critical_angle(sim::brix_to_refractive_index(b), geom.n_prism), geom);
        CHECK(p > prev);
        CHECK(p >= 0.0);
        CHECK(p <= geom.pixel_count - 1);
        prev = p;
    }
}

TEST_CASE("synth_frame: zero-noise frame equals the clamped base curve") {
    sim::SimScenario sc;
    sc.brix = 7.2;
    sc.noise_sd_volts = 0.0;
    sc.burr_rate = 0.0;
    const sim::SimGeometry geom;

    const auto base = sim::base_curve(sc, geom);
    const auto frame = sim::synth_frame(sc, geom);
    REQUIRE(frame.voltages.size() == static_cast<std::size_t>(geom.pixel_count));
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(frame.voltages[i] == std::clamp(base[i], 0.0, geom.full_scale_volts));

    // Steepest sample-to-sample rise sits at the injected boundary.
    const double p = sim::boundary_pixel(
        sim::critical_angle(sim::brix_to_refractive_index(sc.brix), geom.n_prism), geom);
    std::size_t argmax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i + 1 < frame.voltages.size(); ++i) {
        const double d = frame.voltages[i + 1] - frame.voltages[i];
        if (d > best) {
            best = d;
            argmax = i;
        }
    }
    CHECK(std::abs(static_cast<double>(argmax) - p) <= 1.0);
}

TEST_CASE("synth_frame: determinism per seed") {
    sim::SimScenario sc;
    sc.seed = 12345;
    const sim::SimGeometry geom;
    const auto a = sim::synth_frame(sc, geom);
    const auto b = sim::synth_frame(sc, geom);
    REQUIRE(a.voltages.size() == b.voltages.size());
    for (std::size_t i = 0; i < a.voltages.size(); ++i)
        CHECK(a.voltages[i] == b.voltages[i]); // bit-identical

    sc.seed = 12346;
    const auto c = sim::synth_frame(sc, geom);
    CHECK(c.voltages != a.voltages);
}

TEST_CASE("synth_frame: empty plateau over 100 seeds") {
    const sim::SimGeometry geom;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        sim::SimScenario sc = sim::preset_scenario("empty");
        sc.seed = seed;
        const auto frame = sim::synth_frame(sc, geom);
        double sum = 0.0, lo = frame.voltages[0], hi = frame.voltages[0];
        for (std::size_t i = 0; i < 100; ++i) {
            sum += frame.voltages[i];
            lo = std::min(lo, frame.voltages[i]);
            hi = std::max(hi, frame.voltages[i]);
        }
        CHECK(sum / 100.0 >= 0.8 * geom.full_scale_volts);
        CHECK(hi - lo <= 0.05 * geom.full_scale_volts);
    }
}

TEST_CASE("synth_frame: amplitude is a pure led*integration product pre-clamp") {
    const sim::SimGeometry geom;
    sim::SimScenario a;
    a.noise_sd_volts = 0.0;
    a.burr_rate = 0.0;
    a.led_level = 1.0;
    a.integration_time_us = 800.0;
    sim::SimScenario b = a;
    b.led_level = 0.5;
    b.integration_time_us = 1600.0;

    const auto ca = sim::base_curve(a, geom);
    const auto cb = sim::base_curve(b, geom);
    for (std::size_t i = 0; i < ca.size(); ++i)
        CHECK(std::abs(ca[i] - cb[i]) < 1e-9);
}

TEST_CASE("synth_frame: outputs always clamp to [0, full_scale]") {
    const sim::SimGeometry geom;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        sim::SimScenario sc;
        sc.seed = seed;
        sc.noise_sd_volts = 0.5; // absurdly noisy on purpose
        sc.burr_rate = 50.0;
        const auto frame = sim::synth_frame(sc, geom);
        for (const double v : frame.voltages) {
            CHECK(v >= 0.0);
            CHECK(v <= geom.full_scale_volts);
        }
    }
}

TEST_CASE("synth_frame: level signatures over 1000 seeded frames") {
    const sim::SimGeometry geom;
    int rising = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        sim::SimScenario sc; // Normal at default noise
        sc.seed = seed;
        const auto frame = sim::synth_frame(sc, geom);
        if (first_hundred_slope(frame.voltages) > 0.0)
            ++rising;
    }
    CHECK(rising >= 990);
}

TEST_CASE("very-low frames decrease strictly over the first 100 pixels (zero noise)") {
    sim::SimScenario sc = sim::preset_scenario("very-low");
    sc.noise_sd_volts = 0.0;
    sc.burr_rate = 0.0;
    const auto frame = sim::synth_frame(sc, sim::SimGeometry{});
    for (std::size_t i = 0; i + 1 < 100; ++i)
        CHECK(frame.voltages[i + 1] < frame.voltages[i]);
}

TEST_CASE("preset_scenario: catalog") {
    CHECK(sim::preset_scenario("t1600").integration_time_us == 1600.0);
    CHECK(sim::preset_scenario("t800").integration_time_us == 800.0);
    CHECK(sim::preset_scenario("t160").integration_time_us == 160.0);
    CHECK(sim::preset_scenario("empty").level == sim::LiquidLevel::Empty);
    CHECK(sim::preset_scenario("very-low").level == sim::LiquidLevel::VeryLow);
    CHECK(sim::preset_scenario("weak-led").led_level < 1.0);
    CHECK(sim::preset_scenario("normal").brix == 7.2);
    CHECK_THROWS_AS(sim::preset_scenario("bogus"), DomainError);
    CHECK(sim::preset_names().size() == 7);
}

TEST_CASE("scenario/geometry validation") {
    sim::SimScenario sc;
    sc.brix = 90.0;
    CHECK_THROWS_AS(sc.validate(), DomainError);
    sc = {};
    sc.led_level = 1.5;
    CHECK_THROWS_AS(sc.validate(), DomainError);
    sc = {};
    sc.transition_width_px = 0.0;
    CHECK_THROWS_AS(sc.validate(), DomainError);

    sim::SimGeometry g;
    g.n_prism = 1.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = {};
    g.pixel_count = 1;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = {};
    g.full_scale_volts = 0.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
}
