#pragma once

#include <optional>
#include <span>
#include <vector>

#include "refracto/sensor_sim.hpp"

namespace refracto::dsp {

/// Detection constants. Index bookkeeping is left-anchored throughout:
/// moving_average output y[n] averages x[n+1 .. n+M], first_difference
/// output z[n] = y[n+dx] - y[n], so z is indexed in original pixel
/// coordinates and shrinks by M + dx samples.
struct PipelineConfig {
    int window_m = 20;          ///< moving-average window
    int step_dx = 80;           ///< difference step
    int scan_start = 100;       ///< first scanned pixel
    int scan_end = 1800;        ///< last scanned pixel
    double diff_threshold = 2.0; ///< minimum accepted maximum difference (V)
    int outlier_window = 3;     ///< Hampel half-window
    double outlier_k = 3.0;     ///< Hampel MAD multiplier
    double full_scale_volts = 3.3;  ///< sensor ceiling, used by the level classifier
    double level_slope_min = 1e-3;  ///< V/pixel; smaller |slope| is Indeterminate

    /// Checks field invariants, including scan_end + step_dx + window_m <= pixel_count.
    void validate(int pixel_count) const; // throws DomainError
};

/// Hampel filter: samples deviating from their (2*outlier_window+1)-point
/// neighborhood median by more than outlier_k * 1.4826 * MAD are replaced by
/// that median. Replacement decisions use the original values (batch, not
/// running). The first/last outlier_window samples have no full window and
/// pass through unchanged.
std::vector<double> remove_outliers(std::span<const double> voltages, const PipelineConfig& cfg);

/// y[n] = (1/M) * sum of x[n+1 .. n+M], for 0 <= n <= N - M - 1.
std::vector<double> moving_average(std::span<const double> voltages, int window_m);

/// z[n] = y[n + dx] - y[n].
std::vector<double> first_difference(std::span<const double> smoothed, int step_dx);

/// detect_boundary result: position of the maximum rise and whether it
/// cleared the threshold.
struct EdgeCandidate {
    int index1 = 0;
    double max_diff_volts = 0.0;
    bool accepted = false;
};

/// Scans z[n] over [scan_start, scan_end] for the largest positive value
/// (smallest index wins ties); accepted iff it exceeds diff_threshold.
/// Throws NoRisingEdgeError when no z[n] > 0 in the window.
EdgeCandidate detect_boundary(std::span<const double> z, const PipelineConfig& cfg);

/// Classifies the liquid level from pixels [0, scan_start):
/// Empty when that prefix is a high plateau (mean >= 0.8 * full_scale and
/// range <= 0.05 * full_scale); otherwise by the sign of its least-squares
/// slope against +-level_slope_min. Throws AmbiguousLevelError in between.
sim::LiquidLevel classify_level(const sim::PixelFrame& frame, const PipelineConfig& cfg);

/// Full detection result. index1 is only present for Normal-level frames;
/// Empty/VeryLow results carry the level verdict alone (a usage alert).
struct BoundaryDetection {
    sim::LiquidLevel level = sim::LiquidLevel::Normal;
    std::optional<int> index1;
    double max_diff_volts = 0.0;
    bool accepted = false;
};

/// classify_level, then remove_outliers -> moving_average ->
/// first_difference -> detect_boundary for Normal frames.
BoundaryDetection process_frame(const sim::PixelFrame& frame, const PipelineConfig& cfg);

/// Intermediate stages of process_frame, for plot output.
struct PipelineTrace {
    std::vector<double> deburred;
    std::vector<double> smoothed;
    std::vector<double> difference;
};

PipelineTrace trace_frame(const sim::PixelFrame& frame, const PipelineConfig& cfg);

} // namespace refracto::dsp
