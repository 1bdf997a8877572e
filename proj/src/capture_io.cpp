#include "refracto/capture_io.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>

#include "refracto/errors.hpp"

namespace refracto::io {

namespace {

// Shortest representation that parses back to the identical double.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& path, int line,
                    const std::string& what) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(path, line, "expected a number for " + what + ", got '" + text + "'");
    return v;
}

} // namespace

void write_capture(const sim::PixelFrame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");

    out << kCaptureHeader << '\n';
    out << "integration_time_us=" << format_double(frame.integration_time_us) << '\n';
    out << "led_level=" << format_double(frame.led_level) << '\n';
    out << "temperature_c=" << format_double(frame.temperature_c) << '\n';
    out << "pixels=" << frame.voltages.size() << '\n';
    for (const double v : frame.voltages)
        out << format_double(v) << '\n';
    if (!out)
        throw IoError("write failed: " + path.string());
}

sim::PixelFrame read_capture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    const std::string p = path.string();

    std::string line;
    int lineno = 1;
    if (!std::getline(in, line))
        throw ParseError(p, 1, "empty file");
    if (line != kCaptureHeader)
        throw ParseError(p, 1, "unsupported capture header '" + line + "' (want '" +
                                   std::string(kCaptureHeader) + "')");

    sim::PixelFrame frame;
    long pixels = -1;
    bool seen_integration = false, seen_led = false, seen_temperature = false;

    // Metadata block: key=value until the pixels count, in any order.
    while (pixels < 0) {
        ++lineno;
        if (!std::getline(in, line))
            throw ParseError(p, lineno, "unexpected end of file inside metadata");
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(p, lineno, "expected key=value metadata, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);

        if (key == "integration_time_us") {
            if (seen_integration)
                throw ParseError(p, lineno, "duplicate metadata key 'integration_time_us'");
            frame.integration_time_us = parse_double(value, p, lineno, key);
            seen_integration = true;
        } else if (key == "led_level") {
            if (seen_led)
                throw ParseError(p, lineno, "duplicate metadata key 'led_level'");
            frame.led_level = parse_double(value, p, lineno, key);
            seen_led = true;
        } else if (key == "temperature_c") {
            if (seen_temperature)
                throw ParseError(p, lineno, "duplicate metadata key 'temperature_c'");
            frame.temperature_c = parse_double(value, p, lineno, key);
            seen_temperature = true;
        } else if (key == "pixels") {
            const double count = parse_double(value, p, lineno, key);
            if (count < 0 || count != static_cast<double>(static_cast<long>(count)))
                throw ParseError(p, lineno, "pixels must be a non-negative integer");
            pixels = static_cast<long>(count);
        } else {
            throw ParseError(p, lineno, "unknown metadata key '" + key + "'");
        }
    }
    if (!seen_integration)
        throw ParseError(p, lineno, "missing metadata key 'integration_time_us'");
    if (!seen_led)
        throw ParseError(p, lineno, "missing metadata key 'led_level'");
    if (!seen_temperature)
        throw ParseError(p, lineno, "missing metadata key 'temperature_c'");

    frame.voltages.reserve(static_cast<std::size_t>(pixels));
    for (long i = 0; i < pixels; ++i) {
        ++lineno;
        if (!std::getline(in, line))
            throw ParseError(p, lineno,
                             "declared pixels=" + std::to_string(pixels) + " but found only " +
                                 std::to_string(i) + " samples");
        frame.voltages.push_back(parse_double(line, p, lineno, "sample"));
    }
    if (std::getline(in, line) && !line.empty())
        throw ParseError(p, lineno + 1,
                         "extra data after the declared " + std::to_string(pixels) + " samples");
    return frame;
}

} // namespace refracto::io
