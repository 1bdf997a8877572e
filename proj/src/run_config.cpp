#include "refracto/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <string>

#include "refracto/errors.hpp"

namespace refracto::io {

void RunConfig::validate() const {
    pipeline.validate(geometry.pixel_count);
    geometry.validate();
    scenario.validate();
    oversample.validate();
}

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& path, int line) {
    T v{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(path, line, "bad numeric value '" + text + "'");
    return v;
}

} // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    const std::string p = path.string();

    RunConfig cfg;
    using Setter = std::function<void(const std::string&, int)>;
    const std::map<std::string, Setter> setters = {
        {"pipeline.window_m", [&](const std::string& v, int l) { cfg.pipeline.window_m = parse_number<int>(v, p, l); }},
        {"pipeline.step_dx", [&](const std::string& v, int l) { cfg.pipeline.step_dx = parse_number<int>(v, p, l); }},
        {"pipeline.scan_start", [&](const std::string& v, int l) { cfg.pipeline.scan_start = parse_number<int>(v, p, l); }},
        {"pipeline.scan_end", [&](const std::string& v, int l) { cfg.pipeline.scan_end = parse_number<int>(v, p, l); }},
        {"pipeline.diff_threshold", [&](const std::string& v, int l) { cfg.pipeline.diff_threshold = parse_number<double>(v, p, l); }},
        {"pipeline.outlier_window", [&](const std::string& v, int l) { cfg.pipeline.outlier_window = parse_number<int>(v, p, l); }},
        {"pipeline.outlier_k", [&](const std::string& v, int l) { cfg.pipeline.outlier_k = parse_number<double>(v, p, l); }},
        {"pipeline.full_scale_volts", [&](const std::string& v, int l) { cfg.pipeline.full_scale_volts = parse_number<double>(v, p, l); }},
        {"pipeline.level_slope_min", [&](const std::string& v, int l) { cfg.pipeline.level_slope_min = parse_number<double>(v, p, l); }},
        {"geometry.n_prism", [&](const std::string& v, int l) { cfg.geometry.n_prism = parse_number<double>(v, p, l); }},
        {"geometry.angle_to_pixel_slope", [&](const std::string& v, int l) { cfg.geometry.angle_to_pixel_slope = parse_number<double>(v, p, l); }},
        {"geometry.theta_ref", [&](const std::string& v, int l) { cfg.geometry.theta_ref = parse_number<double>(v, p, l); }},
        {"geometry.pixel_ref", [&](const std::string& v, int l) { cfg.geometry.pixel_ref = parse_number<double>(v, p, l); }},
        {"geometry.pixel_count", [&](const std::string& v, int l) { cfg.geometry.pixel_count = parse_number<int>(v, p, l); }},
        {"geometry.full_scale_volts", [&](const std::string& v, int l) { cfg.geometry.full_scale_volts = parse_number<double>(v, p, l); }},
        {"scenario.brix", [&](const std::string& v, int l) { cfg.scenario.brix = parse_number<double>(v, p, l); }},
        {"scenario.level", [&](const std::string& v, int l) {
             if (v == "normal")
                 cfg.scenario.level = sim::LiquidLevel::Normal;
             else if (v == "very-low")
                 cfg.scenario.level = sim::LiquidLevel::VeryLow;
             else if (v == "empty")
                 cfg.scenario.level = sim::LiquidLevel::Empty;
             else
                 throw ParseError(p, l, "scenario.level must be normal, very-low or empty");
         }},
        {"scenario.led_level", [&](const std::string& v, int l) { cfg.scenario.led_level = parse_number<double>(v, p, l); }},
        {"scenario.integration_time_us", [&](const std::string& v, int l) { cfg.scenario.integration_time_us = parse_number<double>(v, p, l); }},
        {"scenario.transition_width_px", [&](const std::string& v, int l) { cfg.scenario.transition_width_px = parse_number<double>(v, p, l); }},
        {"scenario.noise_sd_volts", [&](const std::string& v, int l) { cfg.scenario.noise_sd_volts = parse_number<double>(v, p, l); }},
        {"scenario.burr_rate", [&](const std::string& v, int l) { cfg.scenario.burr_rate = parse_number<double>(v, p, l); }},
        {"scenario.burr_amp_volts", [&](const std::string& v, int l) { cfg.scenario.burr_amp_volts = parse_number<double>(v, p, l); }},
        {"scenario.seed", [&](const std::string& v, int l) { cfg.scenario.seed = parse_number<std::uint64_t>(v, p, l); }},
        {"oversample.base_rate_hz", [&](const std::string& v, int l) { cfg.oversample.base_rate_hz = parse_number<double>(v, p, l); }},
        {"oversample.extra_bits_w", [&](const std::string& v, int l) { cfg.oversample.extra_bits_w = parse_number<int>(v, p, l); }},
        {"oversample.adc_bits", [&](const std::string& v, int l) { cfg.oversample.adc_bits = parse_number<int>(v, p, l); }},
        {"oversample.full_scale_volts", [&](const std::string& v, int l) { cfg.oversample.full_scale_volts = parse_number<double>(v, p, l); }},
        {"oversample.dither_amp_lsb", [&](const std::string& v, int l) { cfg.oversample.dither_amp_lsb = parse_number<double>(v, p, l); }},
        {"oversample.seed", [&](const std::string& v, int l) { cfg.oversample.seed = parse_number<std::uint64_t>(v, p, l); }},
        {"output_dir", [&](const std::string& v, int) { cfg.output_dir = v; }},
    };

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError(p, lineno, "expected key=value, got '" + t + "'");
        const std::string key = trimmed(t.substr(0, eq));
        const std::string value = trimmed(t.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ParseError(p, lineno, "unknown config key '" + key + "'");
        it->second(value, lineno);
    }

    // Reject invariant violations at load time, not at first use.
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw ParseError(p + ": " + e.what());
    }
    return cfg;
}

} // namespace refracto::io
