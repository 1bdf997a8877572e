#include "refracto/oversampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refracto/errors.hpp"
#include "refracto/random.hpp"

namespace refracto::ovs {

void OversampleConfig::validate() const {
    if (!(base_rate_hz > 0.0))
        throw DomainError("oversample: base_rate_hz must be positive");
    if (extra_bits_w < 0)
        throw DomainError("oversample: extra_bits_w must be non-negative");
    if (extra_bits_w > 15)
        throw DomainError("oversample: extra_bits_w too large");
    if (adc_bits < 1 || adc_bits > 24)
        throw DomainError("oversample: adc_bits outside [1, 24]");
    if (!(full_scale_volts > 0.0))
        throw DomainError("oversample: full_scale_volts must be positive");
    if (!(dither_amp_lsb >= 0.0))
        throw DomainError("oversample: dither_amp_lsb must be non-negative");
    // Sub-LSB dither cannot decorrelate the quantizer. Zero stays legal so
    // the no-gain baseline remains expressible.
    if (extra_bits_w > 0 && dither_amp_lsb != 0.0 && dither_amp_lsb < 1.0)
        throw DomainError("oversample: dither amplitude must be 0 or at least 1 LSB");
}

double required_sampling_rate(const OversampleConfig& cfg) {
    cfg.validate();
    return std::pow(4.0, cfg.extra_bits_w) * cfg.base_rate_hz;
}

std::uint32_t quantize(double volts, int adc_bits, double full_scale_volts) {
    const std::uint32_t max_code = (1u << adc_bits) - 1u;
    const double scaled = std::floor(volts / full_scale_volts * static_cast<double>(1u << adc_bits));
    if (scaled <= 0.0)
        return 0;
    if (scaled >= static_cast<double>(max_code))
        return max_code;
    return static_cast<std::uint32_t>(scaled);
}

std::vector<std::uint32_t> oversample_codes(double true_volts, const OversampleConfig& cfg) {
    cfg.validate();
    const std::size_t count = std::size_t{1} << (2 * cfg.extra_bits_w); // 4^w
    const double range = cfg.dither_amp_lsb * cfg.lsb_volts();

    std::vector<std::uint32_t> codes(count);
    if (count == 1 || range == 0.0) {
        for (auto& c : codes)
            c = quantize(true_volts, cfg.adc_bits, cfg.full_scale_volts);
        return codes;
    }

    rng::Generator gen(cfg.seed);
    // Stratified zero-mean dither: one draw per equal slice of the range, in
    // shuffled order. Marginally uniform over [-range/2, range/2); the
    // stratification pins the slice coverage that makes the summed codes
    // track the input to within one enhanced LSB.
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = count - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(gen.uniform_int(i + 1));
        std::swap(order[i], order[j]);
    }
    const double slice = range / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double d =
            (static_cast<double>(order[i]) + gen.uniform01()) * slice - range / 2.0;
        codes[i] = quantize(true_volts + d, cfg.adc_bits, cfg.full_scale_volts);
    }
    return codes;
}

std::uint64_t oversample_decimate(double true_volts, const OversampleConfig& cfg) {
    const auto codes = oversample_codes(true_volts, cfg);
    std::uint64_t sum = 0;
    for (const auto c : codes)
        sum += c;
    return sum >> cfg.extra_bits_w;
}

double base_code_to_volts(std::uint32_t code, const OversampleConfig& cfg) {
    return (static_cast<double>(code) + 0.5) * cfg.lsb_volts();
}

double enhanced_centering_offset(int extra_bits_w) {
    const double scale = static_cast<double>(std::uint64_t{1} << extra_bits_w); // 2^w
    return scale / 2.0 + (scale - 1.0) / (2.0 * scale);
}

double enhanced_code_to_volts(std::uint64_t code, const OversampleConfig& cfg) {
    const double lsb_enh = cfg.lsb_volts() / static_cast<double>(std::uint64_t{1} << cfg.extra_bits_w);
    return (static_cast<double>(code) + enhanced_centering_offset(cfg.extra_bits_w)) * lsb_enh;
}

} // namespace refracto::ovs
