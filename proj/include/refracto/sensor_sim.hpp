#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace refracto::sim {

enum class LiquidLevel { Normal, VeryLow, Empty };

std::string to_string(LiquidLevel level);

/// Critical angle of pure water (n = 1.3330) at the default prism index.
inline const double kDefaultThetaRef = std::asin(1.3330 / 1.90);

/// Optical layout of the prism + line-sensor assembly.
///
/// The critical angle is mapped onto the pixel axis by the affine relation
///   pixel = pixel_ref + angle_to_pixel_slope * (theta_c - theta_ref).
struct SimGeometry {
    double n_prism = 1.90;                 ///< prism refractive index, > 1
    double angle_to_pixel_slope = 28500.0; ///< pixels per radian
    double theta_ref = kDefaultThetaRef;   ///< reference critical angle (rad)
    double pixel_ref = 250.0;              ///< boundary pixel at theta_ref
    int pixel_count = 2496;
    double full_scale_volts = 3.3;

    void validate() const; // throws DomainError
};

/// One synthetic capture request.
struct SimScenario {
    double brix = 7.2;                  ///< [0, 85] % Brix
    LiquidLevel level = LiquidLevel::Normal;
    double led_level = 1.0;             ///< relative luminous intensity [0, 1]
    double integration_time_us = 1600.0;
    double transition_width_px = 20.0;  ///< logistic width of the dark-bright transition
    double noise_sd_volts = 0.01;
    double burr_rate = 5.0;             ///< expected dust spikes per frame
    double burr_amp_volts = 1.0;        ///< spike amplitude upper bound
    std::uint64_t seed = 1;

    void validate() const; // throws DomainError
};

/// One capture: per-pixel voltages plus the metadata the pipeline needs.
struct PixelFrame {
    std::vector<double> voltages;
    double integration_time_us = 1600.0;
    double led_level = 1.0;
    double temperature_c = 20.0;
};

// Frame model constants. The bright-field amplitude is
// kAmplitudeGain * led_level * integration_time_us, on top of a dark
// level of kDarkLevelVolts; voltages clamp to [0, full_scale].
inline constexpr double kDarkLevelVolts = 0.10;
inline constexpr double kAmplitudeGain = 2.0e-3;   // V per (us * led unit)
// Normal frames rise linearly by kPrefixFraction of the amplitude over the
// first kPrefixPixels pixels (stray light toward the bright zone); this is
// what the level classifier keys on and it never enters the detection scan.
inline constexpr double kPrefixFraction = 0.07;
inline constexpr double kPrefixPixels = 100.0;
// VeryLow frames decay as kVeryLowFraction * amplitude * exp(-x / kVeryLowTau).
inline constexpr double kVeryLowFraction = 0.55;
inline constexpr double kVeryLowTau = 150.0;

/// Refractive index of a sucrose solution, n = 1.3330 + 1.427e-3 * brix.
/// Throws DomainError outside [0, 85] % Brix.
double brix_to_refractive_index(double brix);

/// theta_c = arcsin(n_sample / n_prism).
/// Throws NoTotalReflectionError when n_sample > n_prism, DomainError for
/// nonpositive inputs.
double critical_angle(double n_sample, double n_prism);

/// Maps a critical angle to a fractional pixel position.
/// Throws PixelRangeError when the result leaves [0, pixel_count - 1]
/// (a Brix/geometry combination the sensor cannot see).
double boundary_pixel(double theta_c, const SimGeometry& geom);

/// Noiseless, pre-clamp base curve for a scenario (exposed for tests and
/// plotting; synth_frame adds noise/burrs and clamps this).
std::vector<double> base_curve(const SimScenario& scenario, const SimGeometry& geom);

/// Generates one frame. Identical (scenario, geometry) including seed
/// produce bit-identical frames. Draw order: per-pixel Gaussian noise,
/// then Poisson burr count, then per-burr position and amplitude.
PixelFrame synth_frame(const SimScenario& scenario, const SimGeometry& geom);

/// Named scenarios mirroring the documented liquid-level / LED / integration
/// cases: "normal", "empty", "very-low", "weak-led", "t160", "t800", "t1600".
/// Throws DomainError for unknown names.
SimScenario preset_scenario(std::string_view name);

/// All preset names, for CLI help text.
std::vector<std::string> preset_names();

} // namespace refracto::sim
