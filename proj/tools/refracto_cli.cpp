#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "refracto/calibration.hpp"
#include "refracto/capture_io.hpp"
#include "refracto/csv.hpp"
#include "refracto/dsp_pipeline.hpp"
#include "refracto/errors.hpp"
#include "refracto/oversampling.hpp"
#include "refracto/run_config.hpp"
#include "refracto/sensor_sim.hpp"
#include "refracto/stats.hpp"

namespace {

using namespace refracto;

struct CliOptions {
    std::string config_path;

    // simulate
    std::string scenario_name = "normal";
    std::optional<double> brix;
    std::optional<std::uint64_t> seed;
    std::optional<double> temperature;
    std::optional<double> noise_sd;
    std::optional<double> burr_rate;
    std::string out_path;

    // process
    std::vector<std::string> captures;
    std::string model_path;
    std::string plot_path;

    // calibrate
    std::string points_path;
    std::vector<std::string> water_paths;
    std::vector<double> breakpoints;
    std::optional<double> ref_slope;
    std::optional<double> proto_slope;

    // stats
    std::string paired_path;
    std::string ci_path;
    std::string rsd_path;
    std::string pearson_path;
    double level = 0.95;

    // oversample-demo
    int sweep_points = 1000;
    std::optional<int> extra_bits;
    std::optional<int> adc_bits;
    std::optional<double> dither_amp;
};

io::RunConfig effective_config(const CliOptions& opt) {
    if (!opt.config_path.empty())
        return io::load_run_config(opt.config_path);
    return {};
}

// Last two numeric columns of a CSV: the paired (reference, prototype) data.
std::pair<std::vector<double>, std::vector<double>> paired_columns(const io::CsvTable& t) {
    if (t.columns.size() < 2)
        throw ParseError("paired data needs at least two CSV columns");
    return {t.columns[t.columns.size() - 2], t.columns[t.columns.size() - 1]};
}

int cmd_simulate(const CliOptions& opt) {
    io::RunConfig cfg = effective_config(opt);
    // A non-default --scenario takes the preset wholesale; otherwise the
    // config's scenario block is the base. Explicit flags win over both.
    sim::SimScenario scenario = opt.scenario_name == "normal" && !opt.config_path.empty()
                                    ? cfg.scenario
                                    : sim::preset_scenario(opt.scenario_name);
    if (opt.brix)
        scenario.brix = *opt.brix;
    if (opt.seed)
        scenario.seed = *opt.seed;
    if (opt.noise_sd)
        scenario.noise_sd_volts = *opt.noise_sd;
    if (opt.burr_rate)
        scenario.burr_rate = *opt.burr_rate;

    sim::PixelFrame frame = sim::synth_frame(scenario, cfg.geometry);
    if (opt.temperature)
        frame.temperature_c = *opt.temperature;
    io::write_capture(frame, opt.out_path);
    std::printf("wrote %s (%zu pixels, scenario %s)\n", opt.out_path.c_str(),
                frame.voltages.size(), opt.scenario_name.c_str());
    return 0;
}

void write_plot_csv(const std::string& path, const sim::PixelFrame& frame,
                    const dsp::PipelineTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << "pixel,raw,deburred,smoothed,difference\n";
    for (std::size_t i = 0; i < frame.voltages.size(); ++i) {
        out << i << ',' << frame.voltages[i] << ',' << trace.deburred[i] << ',';
        if (i < trace.smoothed.size())
            out << trace.smoothed[i];
        out << ',';
        if (i < trace.difference.size())
            out << trace.difference[i];
        out << '\n';
    }
}

int cmd_process(const CliOptions& opt) {
    const io::RunConfig cfg = effective_config(opt);
    std::optional<cal::CalibrationModel> model;
    if (!opt.model_path.empty())
        model = cal::load_model(opt.model_path);
    if (!opt.plot_path.empty() && opt.captures.size() != 1)
        throw DomainError("--plot needs exactly one capture file");

    for (const auto& file : opt.captures) {
        const sim::PixelFrame frame = io::read_capture(file);
        if (!opt.plot_path.empty())
            write_plot_csv(opt.plot_path, frame, dsp::trace_frame(frame, cfg.pipeline));

        if (model) {
            const cal::Measurement m = cal::measure(frame, *model, cfg.pipeline);
            if (m.level != sim::LiquidLevel::Normal) {
                std::printf("%s: level=%s (no measurement)\n", file.c_str(),
                            sim::to_string(m.level).c_str());
            } else {
                std::printf("%s: level=%s position=%d brix_raw=%.4f brix=%.2f temp=%.1fC\n",
                            file.c_str(), sim::to_string(m.level).c_str(), *m.position,
                            *m.brix_raw, *m.brix_final, m.temperature_c);
            }
        } else {
            const dsp::BoundaryDetection det = dsp::process_frame(frame, cfg.pipeline);
            if (det.level != sim::LiquidLevel::Normal) {
                std::printf("%s: level=%s (no detection)\n", file.c_str(),
                            sim::to_string(det.level).c_str());
            } else {
                std::printf("%s: level=%s index1=%d max_diff=%.4f accepted=%s\n", file.c_str(),
                            sim::to_string(det.level).c_str(), *det.index1, det.max_diff_volts,
                            det.accepted ? "yes" : "no");
            }
        }
    }
    return 0;
}

int cmd_calibrate(const CliOptions& opt) {
    const io::RunConfig cfg = effective_config(opt);

    const io::CsvTable table = io::read_csv(opt.points_path);
    if (table.columns.size() < 2)
        throw ParseError(opt.points_path + ": calibration points need position,brix columns");
    std::vector<cal::CalPoint> points(table.rows());
    for (std::size_t i = 0; i < points.size(); ++i)
        points[i] = {table.columns[0][i], table.columns[1][i]};

    std::vector<double> breakpoints = opt.breakpoints;
    if (breakpoints.empty())
        breakpoints.push_back(cal::kDefaultBreakpointBrix);

    cal::CalibrationModel model = cal::build_model(points, breakpoints);

    if (opt.ref_slope || opt.proto_slope) {
        if (!opt.ref_slope || !opt.proto_slope)
            throw DomainError("k2 needs both --ref-slope and --proto-slope");
        model.k2 = cal::compute_k2(*opt.ref_slope, *opt.proto_slope);
    }
    if (!opt.water_paths.empty()) {
        std::vector<sim::PixelFrame> water;
        water.reserve(opt.water_paths.size());
        for (const auto& w : opt.water_paths)
            water.push_back(io::read_capture(w));
        model = cal::calibrate_zero(water, model, cfg.pipeline);
    }

    cal::save_model(model, opt.out_path);
    std::printf("wrote %s (%zu segments, c0=%.4f, k2=%.6f)\n", opt.out_path.c_str(),
                model.segments.size(), model.c0, model.k2);
    return 0;
}

int cmd_stats(const CliOptions& opt) {
    const double level = opt.level;
    bool did_something = false;

    if (!opt.paired_path.empty()) {
        const auto [a, b] = paired_columns(io::read_csv(opt.paired_path));
        const stats::PairedTestResult r = stats::paired_t_test(a, b, level);
        std::printf("n=%zu\n", a.size());
        std::printf("mean_a=%.6g\nmean_b=%.6g\nsd_a=%.6g\nsd_b=%.6g\n", r.mean_a, r.mean_b,
                    r.sd_a, r.sd_b);
        std::printf("mean_diff=%.6g\nsd_diff=%.6g\n", r.mean_diff, r.sd_diff);
        std::printf("t=%.6g\ndf=%d\np=%.6g\ncohens_d=%.6g\n", r.t_value, r.df, r.p_two_sided,
                    r.cohens_d);
        std::printf("ci_low=%.6g\nci_high=%.6g\n", r.ci_low, r.ci_high);
        std::printf("pearson_r=%.6g\n", stats::pearson_r(a, b));
        did_something = true;
    }
    if (!opt.ci_path.empty()) {
        const io::CsvTable t = io::read_csv(opt.ci_path);
        const auto& xs = t.columns.back();
        const auto [mean, sd] = stats::mean_sd(xs);
        const stats::Interval ci = stats::confidence_interval(xs, level);
        std::printf("n=%zu\nmean=%.6g\nsd=%.6g\nci_low=%.6g\nci_high=%.6g\n", xs.size(), mean,
                    sd, ci.low, ci.high);
        did_something = true;
    }
    if (!opt.rsd_path.empty()) {
        const io::CsvTable t = io::read_csv(opt.rsd_path);
        std::printf("rsd_percent=%.6g\n", stats::rsd_percent(t.columns.back()));
        did_something = true;
    }
    if (!opt.pearson_path.empty()) {
        const auto [a, b] = paired_columns(io::read_csv(opt.pearson_path));
        std::printf("pearson_r=%.6g\n", stats::pearson_r(a, b));
        did_something = true;
    }
    if (!did_something)
        throw DomainError("stats: pass one of --paired/--ci/--rsd/--pearson");
    return 0;
}

int cmd_oversample_demo(const CliOptions& opt) {
    io::RunConfig cfg = effective_config(opt);
    ovs::OversampleConfig os = cfg.oversample;
    if (opt.extra_bits)
        os.extra_bits_w = *opt.extra_bits;
    if (opt.adc_bits)
        os.adc_bits = *opt.adc_bits;
    if (opt.dither_amp)
        os.dither_amp_lsb = *opt.dither_amp;
    if (opt.seed)
        os.seed = *opt.seed;
    os.validate();

    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + opt.out_path + " for writing");
    out << "true_volts,base_code,enhanced_code,base_error_volts,enhanced_error_volts\n";

    // DC sweep across one base LSB at mid scale.
    const double lsb = os.lsb_volts();
    const double v0 = static_cast<double>(1u << (os.adc_bits - 1)) * lsb;
    double sum_sq_base = 0.0, sum_sq_enh = 0.0;
    for (int i = 0; i < opt.sweep_points; ++i) {
        const double v = v0 + (static_cast<double>(i) / opt.sweep_points) * lsb;
        ovs::OversampleConfig point = os;
        point.seed = os.seed + static_cast<std::uint64_t>(i);

        const std::uint32_t base = ovs::quantize(v, os.adc_bits, os.full_scale_volts);
        const std::uint64_t enh = ovs::oversample_decimate(v, point);
        const double base_err = ovs::base_code_to_volts(base, os) - v;
        const double enh_err = ovs::enhanced_code_to_volts(enh, os) - v;
        sum_sq_base += base_err * base_err;
        sum_sq_enh += enh_err * enh_err;
        out << v << ',' << base << ',' << enh << ',' << base_err << ',' << enh_err << '\n';
    }
    const double rms_base = std::sqrt(sum_sq_base / opt.sweep_points);
    const double rms_enh = std::sqrt(sum_sq_enh / opt.sweep_points);
    std::printf("wrote %s\n", opt.out_path.c_str());
    std::printf("f_os=%.0f Hz (4^%d x f_s)\n", ovs::required_sampling_rate(os), os.extra_bits_w);
    std::printf("rms_base=%.6g V\nrms_enhanced=%.6g V\nrms_ratio=%.4f\n", rms_base, rms_enh,
                rms_enh / rms_base);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"refracto: critical-angle refractometer signal-processing toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    app.set_help_all_flag("--help-all");

    auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic capture file");
    sim_cmd->add_option("--scenario", opt.scenario_name, "preset scenario name")
        ->default_val("normal");
    sim_cmd->add_option("--brix", opt.brix, "solution concentration, % Brix");
    sim_cmd->add_option("--seed", opt.seed, "PRNG seed");
    sim_cmd->add_option("--temperature", opt.temperature, "solution temperature, C");
    sim_cmd->add_option("--noise-sd", opt.noise_sd, "white-noise sd, V");
    sim_cmd->add_option("--burr-rate", opt.burr_rate, "expected dust spikes per frame");
    sim_cmd->add_option("--out", opt.out_path, "output capture path")->required();
    sim_cmd->add_option("--config", opt.config_path, "key=value config file");

    auto* proc_cmd = app.add_subcommand("process", "detect the boundary in capture files");
    proc_cmd->add_option("captures", opt.captures, "capture files")->required();
    proc_cmd->add_option("--model", opt.model_path, "calibration model JSON");
    proc_cmd->add_option("--config", opt.config_path, "key=value config file");
    proc_cmd->add_option("--plot", opt.plot_path, "write pixel,raw,deburred,smoothed,difference CSV");

    auto* cal_cmd = app.add_subcommand("calibrate", "build a calibration model");
    cal_cmd->add_option("--points", opt.points_path, "position,brix CSV")->required();
    cal_cmd->add_option("--water", opt.water_paths, "pure-water capture files for the zero offset");
    cal_cmd->add_option("--breakpoint", opt.breakpoints, "Brix regime breakpoints (default 17)");
    cal_cmd->add_option("--ref-slope", opt.ref_slope, "reference instrument slope, Brix/px");
    cal_cmd->add_option("--proto-slope", opt.proto_slope, "prototype slope, Brix/px");
    cal_cmd->add_option("--out", opt.out_path, "output model JSON path")->required();
    cal_cmd->add_option("--config", opt.config_path, "key=value config file");

    auto* stats_cmd = app.add_subcommand("stats", "validation statistics over CSV data");
    stats_cmd->add_option("--paired", opt.paired_path, "two-column CSV: paired t-test + pearson");
    stats_cmd->add_option("--ci", opt.ci_path, "one-column CSV: confidence interval");
    stats_cmd->add_option("--rsd", opt.rsd_path, "one-column CSV: relative standard deviation");
    stats_cmd->add_option("--pearson", opt.pearson_path, "two-column CSV: correlation only");
    stats_cmd->add_option("--level", opt.level, "confidence level")->default_val(0.95);

    auto* ovs_cmd = app.add_subcommand("oversample-demo", "dithered oversampling DC sweep CSV");
    ovs_cmd->add_option("--out", opt.out_path, "output CSV path")->required();
    ovs_cmd->add_option("--points", opt.sweep_points, "sweep points")->default_val(1000);
    ovs_cmd->add_option("--w", opt.extra_bits, "extra resolution bits");
    ovs_cmd->add_option("--bits", opt.adc_bits, "ADC resolution bits");
    ovs_cmd->add_option("--dither", opt.dither_amp, "dither amplitude, LSB");
    ovs_cmd->add_option("--seed", opt.seed, "PRNG seed");
    ovs_cmd->add_option("--config", opt.config_path, "key=value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }

    try {
        if (sim_cmd->parsed())
            return cmd_simulate(opt);
        if (proc_cmd->parsed())
            return cmd_process(opt);
        if (cal_cmd->parsed())
            return cmd_calibrate(opt);
        if (stats_cmd->parsed())
            return cmd_stats(opt);
        if (ovs_cmd->parsed())
            return cmd_oversample_demo(opt);
    } catch (const refracto::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
