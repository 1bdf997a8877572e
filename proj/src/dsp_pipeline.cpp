#include "refracto/dsp_pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "refracto/errors.hpp"

namespace refracto::dsp {

void PipelineConfig::validate(int pixel_count) const {
    if (window_m < 1)
        throw DomainError("pipeline: window_m must be at least 1");
    if (step_dx < 1)
        throw DomainError("pipeline: step_dx must be at least 1");
    if (scan_start < 0 || scan_start >= scan_end)
        throw DomainError("pipeline: need 0 <= scan_start < scan_end");
    if (scan_end + step_dx + window_m > pixel_count)
        throw DomainError("pipeline: scan_end + step_dx + window_m exceeds pixel count");
    if (!(diff_threshold >= 0.0))
        throw DomainError("pipeline: diff_threshold must be non-negative");
    if (outlier_window < 1)
        throw DomainError("pipeline: outlier_window must be at least 1");
    if (!(outlier_k > 0.0))
        throw DomainError("pipeline: outlier_k must be positive");
    if (!(full_scale_volts > 0.0))
        throw DomainError("pipeline: full_scale_volts must be positive");
    if (!(level_slope_min > 0.0))
        throw DomainError("pipeline: level_slope_min must be positive");
}

namespace {

// Median of a small scratch buffer (mutates it).
double median_of(std::vector<double>& w) {
    const std::size_t mid = w.size() / 2;
    std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(mid), w.end());
    return w[mid];
}

constexpr double kMadToSigma = 1.4826;

} // namespace

std::vector<double> remove_outliers(std::span<const double> voltages, const PipelineConfig& cfg) {
    const int hw = cfg.outlier_window;
    const std::size_t win = static_cast<std::size_t>(2 * hw + 1);
    if (voltages.size() < win)
        throw SizeError("remove_outliers: sequence shorter than the Hampel window");

    std::vector<double> out(voltages.begin(), voltages.end());
    std::vector<double> scratch(win);
    for (std::size_t i = static_cast<std::size_t>(hw); i + static_cast<std::size_t>(hw) < voltages.size(); ++i) {
        scratch.assign(voltages.begin() + static_cast<std::ptrdiff_t>(i) - hw,
                       voltages.begin() + static_cast<std::ptrdiff_t>(i) + hw + 1);
        const double med = median_of(scratch);
        for (double& s : scratch)
            s = std::abs(s - med);
        const double mad = median_of(scratch);
        if (std::abs(voltages[i] - med) > cfg.outlier_k * kMadToSigma * mad)
            out[i] = med;
    }
    return out;
}

std::vector<double> moving_average(std::span<const double> voltages, int window_m) {
    if (window_m < 1)
        throw DomainError("moving_average: window must be at least 1");
    const std::size_t m = static_cast<std::size_t>(window_m);
    if (voltages.size() < m + 1)
        throw SizeError("moving_average: sequence shorter than window + 1");

    std::vector<double> y(voltages.size() - m);
    for (std::size_t n = 0; n < y.size(); ++n) {
        double acc = 0.0;
        for (std::size_t i = n + 1; i <= n + m; ++i)
            acc += voltages[i];
        y[n] = acc / static_cast<double>(window_m);
    }
    return y;
}

std::vector<double> first_difference(std::span<const double> smoothed, int step_dx) {
    if (step_dx < 1)
        throw DomainError("first_difference: step must be at least 1");
    const std::size_t dx = static_cast<std::size_t>(step_dx);
    if (smoothed.size() < dx + 1)
        throw SizeError("first_difference: sequence shorter than step + 1");

    std::vector<double> z(smoothed.size() - dx);
    for (std::size_t n = 0; n < z.size(); ++n)
        z[n] = smoothed[n + dx] - smoothed[n];
    return z;
}

EdgeCandidate detect_boundary(std::span<const double> z, const PipelineConfig& cfg) {
    const std::size_t lo = static_cast<std::size_t>(cfg.scan_start);
    const std::size_t hi = static_cast<std::size_t>(cfg.scan_end);
    if (hi >= z.size())
        throw SizeError("detect_boundary: scan window exceeds difference sequence");

    int best = -1;
    double best_val = 0.0;
    for (std::size_t n = lo; n <= hi; ++n) {
        // Only rising differences qualify; the first maximum wins ties.
        if (z[n] > 0.0 && (best < 0 || z[n] > best_val)) {
            best = static_cast<int>(n);
            best_val = z[n];
        }
    }
    if (best < 0)
        throw NoRisingEdgeError("no positive difference inside the scan window");

    EdgeCandidate edge;
    edge.index1 = best;
    edge.max_diff_volts = best_val;
    edge.accepted = best_val > cfg.diff_threshold;
    return edge;
}

sim::LiquidLevel classify_level(const sim::PixelFrame& frame, const PipelineConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(cfg.scan_start);
    if (frame.voltages.size() < n || n < 2)
        throw SizeError("classify_level: frame shorter than the classification window");

    double sum = 0.0;
    double vmin = frame.voltages[0];
    double vmax = frame.voltages[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double v = frame.voltages[i];
        sum += v;
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    const double mean = sum / static_cast<double>(n);
    if (mean >= 0.8 * cfg.full_scale_volts && (vmax - vmin) <= 0.05 * cfg.full_scale_volts)
        return sim::LiquidLevel::Empty;

    // Least-squares slope over pixels [0, scan_start).
    const double xbar = (static_cast<double>(n) - 1.0) / 2.0;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (frame.voltages[i] - mean);
        sxx += dx * dx;
    }
    const double slope = sxy / sxx;
    if (slope <= -cfg.level_slope_min)
        return sim::LiquidLevel::VeryLow;
    if (slope >= cfg.level_slope_min)
        return sim::LiquidLevel::Normal;
    throw AmbiguousLevelError("first pixels match neither level signature (slope " +
                              std::to_string(slope) + " V/px)");
}

BoundaryDetection process_frame(const sim::PixelFrame& frame, const PipelineConfig& cfg) {
    cfg.validate(static_cast<int>(frame.voltages.size()));

    BoundaryDetection result;
    result.level = classify_level(frame, cfg);
    if (result.level != sim::LiquidLevel::Normal)
        return result; // usage alert; detection is meaningless here

    const auto deburred = remove_outliers(frame.voltages, cfg);
    const auto smoothed = moving_average(deburred, cfg.window_m);
    const auto diff = first_difference(smoothed, cfg.step_dx);
    const EdgeCandidate edge = detect_boundary(diff, cfg);

    result.index1 = edge.index1;
    result.max_diff_volts = edge.max_diff_volts;
    result.accepted = edge.accepted;
    return result;
}

PipelineTrace trace_frame(const sim::PixelFrame& frame, const PipelineConfig& cfg) {
    cfg.validate(static_cast<int>(frame.voltages.size()));
    PipelineTrace t;
    t.deburred = remove_outliers(frame.voltages, cfg);
    t.smoothed = moving_average(t.deburred, cfg.window_m);
    t.difference = first_difference(t.smoothed, cfg.step_dx);
    return t;
}

} // namespace refracto::dsp
