#include "refracto/sensor_sim.hpp"

#include <algorithm>
#include <cmath>

#include "refracto/errors.hpp"
#include "refracto/random.hpp"

namespace refracto::sim {

std::string to_string(LiquidLevel level) {
    switch (level) {
    case LiquidLevel::Normal: return "NORMAL";
    case LiquidLevel::VeryLow: return "VERY_LOW";
    case LiquidLevel::Empty: return "EMPTY";
    }
    return "?";
}

void SimGeometry::validate() const {
    if (!(n_prism > 1.0))
        throw DomainError("geometry: n_prism must exceed 1.0");
    if (pixel_count < 2)
        throw DomainError("geometry: pixel_count must be at least 2");
    if (!(full_scale_volts > 0.0))
        throw DomainError("geometry: full_scale_volts must be positive");
    if (!std::isfinite(angle_to_pixel_slope) || !std::isfinite(theta_ref) || !std::isfinite(pixel_ref))
        throw DomainError("geometry: non-finite field");
}

void SimScenario::validate() const {
    if (!(brix >= 0.0 && brix <= 85.0))
        throw DomainError("scenario: brix outside [0, 85]");
    if (!(led_level >= 0.0 && led_level <= 1.0))
        throw DomainError("scenario: led_level outside [0, 1]");
    if (!(transition_width_px > 0.0))
        throw DomainError("scenario: transition_width_px must be positive");
    if (!(noise_sd_volts >= 0.0))
        throw DomainError("scenario: noise_sd_volts must be non-negative");
    if (!(burr_rate >= 0.0))
        throw DomainError("scenario: burr_rate must be non-negative");
    if (!(integration_time_us > 0.0))
        throw DomainError("scenario: integration_time_us must be positive");
    if (!(burr_amp_volts >= 0.0))
        throw DomainError("scenario: burr_amp_volts must be non-negative");
}

double brix_to_refractive_index(double brix) {
    if (!(brix >= 0.0 && brix <= 85.0))
        throw DomainError("brix outside [0, 85]");
    return 1.3330 + 1.427e-3 * brix;
}

double critical_angle(double n_sample, double n_prism) {
    if (!(n_sample > 0.0) || !(n_prism > 0.0))
        throw DomainError("refractive indices must be positive");
    if (n_sample > n_prism)
        throw NoTotalReflectionError("n_sample exceeds n_prism: no total internal reflection");
    return std::asin(n_sample / n_prism);
}

double boundary_pixel(double theta_c, const SimGeometry& geom) {
    geom.validate();
    if (!(theta_c > 0.0) || theta_c > std::asin(1.0) + 1e-12)
        throw DomainError("critical angle outside (0, pi/2]");
    const double pixel = geom.pixel_ref + geom.angle_to_pixel_slope * (theta_c - geom.theta_ref);
    if (pixel < 0.0 || pixel > static_cast<double>(geom.pixel_count - 1))
        throw PixelRangeError("boundary at pixel " + std::to_string(pixel) +
                              " lies outside the sensor array");
    return pixel;
}

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Dimensionless bright-field profile; the pre-clamp curve is
// dark + amplitude * shape(x).
double level_shape(const SimScenario& sc, double boundary_px, double x) {
    switch (sc.level) {
    case LiquidLevel::Normal:
        return kPrefixFraction * std::min(x / kPrefixPixels, 1.0) +
               logistic((x - boundary_px) / sc.transition_width_px);
    case LiquidLevel::Empty:
        // No liquid: total reflection everywhere, boundary off-array.
        return kPrefixFraction + 1.0;
    case LiquidLevel::VeryLow:
        return kVeryLowFraction * std::exp(-x / kVeryLowTau);
    }
    return 0.0;
}

} // namespace

std::vector<double> base_curve(const SimScenario& scenario, const SimGeometry& geom) {
    scenario.validate();
    geom.validate();

    double boundary_px = 0.0;
    if (scenario.level == LiquidLevel::Normal) {
        boundary_px = boundary_pixel(
            critical_angle(brix_to_refractive_index(scenario.brix), geom.n_prism), geom);
    }
    const double amplitude =
        kAmplitudeGain * scenario.led_level * scenario.integration_time_us;

    std::vector<double> curve(static_cast<std::size_t>(geom.pixel_count));
    for (int i = 0; i < geom.pixel_count; ++i) {
        curve[static_cast<std::size_t>(i)] =
            kDarkLevelVolts +
            amplitude * level_shape(scenario, boundary_px, static_cast<double>(i));
    }
    return curve;
}

PixelFrame synth_frame(const SimScenario& scenario, const SimGeometry& geom) {
    std::vector<double> v = base_curve(scenario, geom);
    rng::Generator gen(scenario.seed);

    if (scenario.noise_sd_volts > 0.0) {
        for (double& s : v)
            s += gen.normal(0.0, scenario.noise_sd_volts);
    }
    if (scenario.burr_rate > 0.0 && scenario.burr_amp_volts > 0.0) {
        const int burrs = gen.poisson(scenario.burr_rate);
        for (int b = 0; b < burrs; ++b) {
            const auto pos = gen.uniform_int(static_cast<std::uint64_t>(geom.pixel_count));
            // amplitude in (0, burr_amp]: dust spikes are one-pixel and positive
            v[pos] += scenario.burr_amp_volts * (1.0 - gen.uniform01());
        }
    }
    for (double& s : v)
        s = std::clamp(s, 0.0, geom.full_scale_volts);

    PixelFrame frame;
    frame.voltages = std::move(v);
    frame.integration_time_us = scenario.integration_time_us;
    frame.led_level = scenario.led_level;
    frame.temperature_c = 20.0;
    return frame;
}

SimScenario preset_scenario(std::string_view name) {
    SimScenario sc; // defaults are the "normal" preset
    if (name == "normal" || name == "t1600")
        return sc;
    if (name == "empty") {
        sc.level = LiquidLevel::Empty;
        return sc;
    }
    if (name == "very-low") {
        sc.level = LiquidLevel::VeryLow;
        return sc;
    }
    if (name == "weak-led") {
        // Classifies Normal but the maximum difference stays below the
        // default 2.0 V threshold (1.69 V), triggering the weak-signal path.
        sc.led_level = 0.70;
        return sc;
    }
    if (name == "t160") {
        sc.integration_time_us = 160.0;
        return sc;
    }
    if (name == "t800") {
        sc.integration_time_us = 800.0;
        return sc;
    }
    throw DomainError("unknown scenario preset: " + std::string(name));
}

std::vector<std::string> preset_names() {
    return {"normal", "empty", "very-low", "weak-led", "t160", "t800", "t1600"};
}

} // namespace refracto::sim
