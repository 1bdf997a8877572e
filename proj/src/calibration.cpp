#include "refracto/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "refracto/errors.hpp"

namespace refracto::cal {

void CalibrationModel::validate() const {
    if (!(k2 > 0.0))
        throw DomainError("model: k2 must be positive");
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].lo < segments[i].hi))
            throw DomainError("model: segment bounds must satisfy lo < hi");
        if (!(segments[i].r_squared >= 0.0 && segments[i].r_squared <= 1.0))
            throw DomainError("model: r_squared outside [0, 1]");
        if (i > 0 && segments[i].lo != segments[i - 1].hi)
            throw DomainError("model: segments must be contiguous");
    }
}

LinearSegment fit_linear_segment(std::span<const CalPoint> points) {
    if (points.size() < 2)
        throw DegenerateFitError("fit needs at least two points");

    double sx = 0.0, sy = 0.0;
    for (const auto& p : points) {
        sx += p.position;
        sy += p.brix;
    }
    const double n = static_cast<double>(points.size());
    const double xbar = sx / n;
    const double ybar = sy / n;

    double sxx = 0.0, sxy = 0.0;
    double lo = points[0].position, hi = points[0].position;
    for (const auto& p : points) {
        sxx += (p.position - xbar) * (p.position - xbar);
        sxy += (p.position - xbar) * (p.brix - ybar);
        lo = std::min(lo, p.position);
        hi = std::max(hi, p.position);
    }
    if (sxx == 0.0)
        throw DegenerateFitError("all calibration points share one position");

    LinearSegment seg;
    seg.slope = sxy / sxx;
    seg.intercept = ybar - seg.slope * xbar;
    seg.lo = lo;
    seg.hi = hi;

    double sse = 0.0, sst = 0.0;
    for (const auto& p : points) {
        const double r = p.brix - (seg.slope * p.position + seg.intercept);
        sse += r * r;
        sst += (p.brix - ybar) * (p.brix - ybar);
    }
    seg.r_squared = sst == 0.0 ? 1.0 : std::clamp(1.0 - sse / sst, 0.0, 1.0);
    return seg;
}

CalibrationModel build_model(std::span<const CalPoint> points,
                             std::span<const double> breakpoints_brix) {
    std::vector<double> bps(breakpoints_brix.begin(), breakpoints_brix.end());
    std::sort(bps.begin(), bps.end());

    // Group index of a point: number of breakpoints at or below its brix.
    const std::size_t n_groups = bps.size() + 1;
    std::vector<std::vector<CalPoint>> groups(n_groups);
    for (const auto& p : points) {
        std::size_t g = 0;
        while (g < bps.size() && p.brix >= bps[g])
            ++g;
        groups[g].push_back(p);
    }

    CalibrationModel model;
    for (std::size_t g = 0; g < n_groups; ++g) {
        if (groups[g].size() < 2)
            throw InsufficientDataError("calibration group " + std::to_string(g) +
                                        " has fewer than two points");
        model.segments.push_back(fit_linear_segment(groups[g]));
    }

    std::sort(model.segments.begin(), model.segments.end(),
              [](const LinearSegment& a, const LinearSegment& b) { return a.lo < b.lo; });

    // Close the gaps between per-group position ranges at their midpoints so
    // segment selection is total over the covered range.
    for (std::size_t i = 0; i + 1 < model.segments.size(); ++i) {
        const double mid = (model.segments[i].hi + model.segments[i + 1].lo) / 2.0;
        model.segments[i].hi = mid;
        model.segments[i + 1].lo = mid;
    }
    model.validate();
    return model;
}

namespace {

const LinearSegment& segment_for(const CalibrationModel& model, double position) {
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        const auto& s = model.segments[i];
        const bool last = i + 1 == model.segments.size();
        if (position >= s.lo && (position < s.hi || (last && position <= s.hi)))
            return s;
    }
    throw CalibrationRangeError("position " + std::to_string(position) +
                                " outside the calibrated range");
}

} // namespace

double position_to_concentration(const CalibrationModel& model, double position) {
    if (model.segments.empty())
        throw CalibrationInputError("model has no segments");
    const LinearSegment& s = segment_for(model, position);
    return s.slope * position + s.intercept - model.c0;
}

double finalize(double c_m, const CalibrationModel& model, double temperature_c) {
    return model.k2 * (c_m + model.temp_coeff * (temperature_c - model.temp_ref_c));
}

CalibrationModel calibrate_zero(std::span<const sim::PixelFrame> water_frames,
                                const CalibrationModel& model,
                                const dsp::PipelineConfig& cfg) {
    if (model.segments.empty())
        throw CalibrationInputError("model has no segments");
    if (water_frames.empty())
        throw CalibrationInputError("zero calibration needs at least one water frame");

    double acc = 0.0;
    for (const auto& frame : water_frames) {
        const auto det = dsp::process_frame(frame, cfg);
        if (det.level != sim::LiquidLevel::Normal)
            throw CalibrationInputError("water frame classified " + sim::to_string(det.level) +
                                        "; zero calibration needs Normal frames");
        if (!det.accepted)
            throw CalibrationInputError("water frame detection below threshold");
        const LinearSegment& s = segment_for(model, static_cast<double>(*det.index1));
        acc += s.slope * static_cast<double>(*det.index1) + s.intercept; // f(P) with c0 = 0
    }

    CalibrationModel out = model;
    out.c0 = acc / static_cast<double>(water_frames.size());
    return out;
}

double compute_k2(double reference_slope, double prototype_slope) {
    if (prototype_slope == 0.0)
        throw DomainError("compute_k2: prototype slope is zero");
    return reference_slope / prototype_slope;
}

Measurement measure(const sim::PixelFrame& frame, const CalibrationModel& model,
                    const dsp::PipelineConfig& cfg) {
    if (model.segments.empty())
        throw CalibrationInputError("model has no segments; calibrate first");

    Measurement m;
    m.temperature_c = frame.temperature_c;

    const auto det = dsp::process_frame(frame, cfg);
    m.level = det.level;
    if (det.level != sim::LiquidLevel::Normal)
        return m; // level alert: no Brix value
    if (!det.accepted)
        throw WeakSignalError("maximum difference " + std::to_string(det.max_diff_volts) +
                              " V below threshold; light intensity too low");

    m.position = det.index1;
    m.brix_raw = position_to_concentration(model, static_cast<double>(*det.index1));
    m.brix_final = finalize(*m.brix_raw, model, frame.temperature_c);
    return m;
}

void save_model(const CalibrationModel& model, const std::filesystem::path& path) {
    model.validate();
    nlohmann::json doc;
    doc["version"] = kModelFormatVersion;
    doc["segments"] = nlohmann::json::array();
    for (const auto& s : model.segments) {
        doc["segments"].push_back({{"lo", s.lo},
                                   {"hi", s.hi},
                                   {"slope", s.slope},
                                   {"intercept", s.intercept},
                                   {"r_squared", s.r_squared}});
    }
    doc["c0"] = model.c0;
    doc["k2"] = model.k2;
    doc["temp_coeff"] = model.temp_coeff;
    doc["temp_ref_c"] = model.temp_ref_c;

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

namespace {

double require_number(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw ParseError(where + ": missing field '" + key + "'");
    if (!j[key].is_number())
        throw ParseError(where + ": field '" + key + "' is not a number");
    return j[key].get<double>();
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end())
            throw ParseError(where + ": unknown field '" + key + "'");
    }
}

} // namespace

CalibrationModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }

    const std::string where = path.string();
    reject_unknown(doc, {"version", "segments", "c0", "k2", "temp_coeff", "temp_ref_c"}, where);
    if (!doc.contains("version") || !doc["version"].is_number_integer())
        throw ParseError(where + ": missing integer 'version'");
    if (doc["version"].get<int>() != kModelFormatVersion)
        throw ParseError(where + ": unsupported model version " +
                         std::to_string(doc["version"].get<int>()));
    if (!doc.contains("segments") || !doc["segments"].is_array())
        throw ParseError(where + ": missing 'segments' array");

    CalibrationModel model;
    for (const auto& js : doc["segments"]) {
        reject_unknown(js, {"lo", "hi", "slope", "intercept", "r_squared"}, where + ": segment");
        LinearSegment s;
        s.lo = require_number(js, "lo", where);
        s.hi = require_number(js, "hi", where);
        s.slope = require_number(js, "slope", where);
        s.intercept = require_number(js, "intercept", where);
        s.r_squared = require_number(js, "r_squared", where);
        model.segments.push_back(s);
    }
    model.c0 = require_number(doc, "c0", where);
    model.k2 = require_number(doc, "k2", where);
    model.temp_coeff = require_number(doc, "temp_coeff", where);
    model.temp_ref_c = require_number(doc, "temp_ref_c", where);
    model.validate();
    return model;
}

} // namespace refracto::cal
