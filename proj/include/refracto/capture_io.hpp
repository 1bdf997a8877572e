#pragma once

#include <filesystem>

#include "refracto/sensor_sim.hpp"

namespace refracto::io {

/// Capture file: `# refracto-capture v1` header, key=value metadata
/// (integration_time_us, led_level, temperature_c, pixels, in that order
/// when written), then one voltage per line. Voltages are printed with
/// shortest round-trip formatting, so writing the same frame twice is
/// byte-identical and read(write(f)) == f exactly.
void write_capture(const sim::PixelFrame& frame, const std::filesystem::path& path);

/// Parses and validates a capture file. Throws ParseError (naming the
/// offending line) for version mismatches, missing/duplicate/unknown
/// metadata keys, non-numeric samples, or a sample count that does not
/// match the declared pixels; IoError when the file cannot be opened.
sim::PixelFrame read_capture(const std::filesystem::path& path);

inline constexpr const char* kCaptureHeader = "# refracto-capture v1";

} // namespace refracto::io
