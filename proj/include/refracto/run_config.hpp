#pragma once

#include <filesystem>
#include <string>

#include "refracto/dsp_pipeline.hpp"
#include "refracto/oversampling.hpp"
#include "refracto/sensor_sim.hpp"

namespace refracto::io {

/// Everything a CLI run can configure, loadable from a flat key=value file
/// (keys like `pipeline.window_m`; '#' starts a comment). Unknown keys are
/// rejected, and every value is checked against its module's invariants at
/// load time.
struct RunConfig {
    dsp::PipelineConfig pipeline;
    sim::SimGeometry geometry;
    sim::SimScenario scenario;
    ovs::OversampleConfig oversample;
    std::string output_dir = ".";

    void validate() const;
};

RunConfig load_run_config(const std::filesystem::path& path);

} // namespace refracto::io
