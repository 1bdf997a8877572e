#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "refracto/dsp_pipeline.hpp"
#include "refracto/sensor_sim.hpp"

namespace refracto::cal {

/// One least-squares segment of the piecewise position->Brix map.
/// Segments are half-open [lo, hi) except the last, which is closed.
struct LinearSegment {
    double lo = 0.0;        ///< pixels
    double hi = 0.0;        ///< pixels
    double slope = 0.0;     ///< Brix per pixel
    double intercept = 0.0; ///< Brix
    double r_squared = 1.0;
};

struct CalibrationModel {
    std::vector<LinearSegment> segments; ///< sorted, contiguous
    double c0 = 0.0;         ///< zero offset in Brix (pure-water reading)
    double k2 = 1.0;         ///< display scale (> 0)
    double temp_coeff = 0.0; ///< Brix per degree C (0 = compensation off)
    double temp_ref_c = 20.0;

    void validate() const; // throws DomainError
};

struct CalPoint {
    double position = 0.0; ///< pixels
    double brix = 0.0;
};

/// A completed reading. brix_raw is C_m (before k2 and temperature
/// compensation); brix_final = k2 * (brix_raw + temp_coeff * (T - temp_ref)).
/// Both are absent on Empty/VeryLow level alerts.
struct Measurement {
    sim::LiquidLevel level = sim::LiquidLevel::Normal;
    std::optional<double> brix_final;
    std::optional<double> brix_raw;
    std::optional<int> position;
    double temperature_c = 20.0;
};

/// Ordinary least squares over (position, brix) points. r_squared is
/// 1 - SSE/SST (defined as 1 when SST = 0); lo/hi are the min/max positions.
/// Throws DegenerateFitError with fewer than two distinct positions.
LinearSegment fit_linear_segment(std::span<const CalPoint> points);

/// Partitions points at the Brix breakpoints (a point with brix == b goes to
/// the upper group), fits one segment per group, and splits adjacent segment
/// ranges at the midpoint between the groups' boundary positions so the
/// segments tile their union. c0 = 0 and k2 = 1 until calibrated.
/// Throws InsufficientDataError when any group has fewer than two points.
CalibrationModel build_model(std::span<const CalPoint> points,
                             std::span<const double> breakpoints_brix);

/// C_m = f(p) - c0, where f is the segment containing p.
/// Throws CalibrationRangeError outside the calibrated range.
double position_to_concentration(const CalibrationModel& model, double position);

/// C_f = k2 * (c_m + temp_coeff * (temperature_c - temp_ref_c)).
double finalize(double c_m, const CalibrationModel& model, double temperature_c);

/// Zero calibration: c0 becomes the mean of f(P) over the water frames
/// (evaluated with c0 = 0, so repeated calibration is idempotent). Every
/// frame must classify Normal and clear the detection threshold.
/// Returns a new model; the input is not mutated.
CalibrationModel calibrate_zero(std::span<const sim::PixelFrame> water_frames,
                                const CalibrationModel& model,
                                const dsp::PipelineConfig& cfg);

/// k2 = reference_slope / prototype_slope. Throws DomainError when the
/// prototype slope is zero.
double compute_k2(double reference_slope, double prototype_slope);

/// Full measurement chain: process_frame, then position -> C_m -> C_f.
/// Empty/VeryLow frames return a level alert without Brix values; a
/// detection below threshold throws WeakSignalError.
Measurement measure(const sim::PixelFrame& frame, const CalibrationModel& model,
                    const dsp::PipelineConfig& cfg);

/// JSON persistence. The document carries exactly: version, segments
/// [{lo,hi,slope,intercept,r_squared}], c0, k2, temp_coeff, temp_ref_c.
/// Unknown fields and version mismatches are rejected on load.
void save_model(const CalibrationModel& model, const std::filesystem::path& path);
CalibrationModel load_model(const std::filesystem::path& path);

inline constexpr int kModelFormatVersion = 1;
inline constexpr double kDefaultBreakpointBrix = 17.0;

} // namespace refracto::cal
