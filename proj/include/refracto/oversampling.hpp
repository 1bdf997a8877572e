#pragma once

#include <cstdint>
#include <vector>

namespace refracto::ovs {

/// Oversample-and-decimate settings. Gaining w effective bits costs
/// 4^w conversions per output (f_os = 4^w * f_s).
struct OversampleConfig {
    double base_rate_hz = 1000.0;  ///< f_s
    int extra_bits_w = 2;          ///< resolution bits to gain, >= 0
    int adc_bits = 12;
    double full_scale_volts = 3.3;
    double dither_amp_lsb = 1.0;   ///< dither range in base LSB; >= 1 when w > 0
    std::uint64_t seed = 1;

    void validate() const; // throws DomainError

    double lsb_volts() const { return full_scale_volts / static_cast<double>(1u << adc_bits); }
};

/// f_os = 4^w * f_s.
double required_sampling_rate(const OversampleConfig& cfg);

/// Ideal saturating quantizer: clamp(floor(v / full_scale * 2^bits), 0, 2^bits - 1).
std::uint32_t quantize(double volts, int adc_bits, double full_scale_volts);

/// The 4^w dithered conversions behind one enhanced output. The dither is
/// zero-mean with a uniform marginal over dither_amp_lsb LSB, stratified
/// across the range (random stratum order, uniform jitter within each
/// stratum); stratification is what guarantees the w-bit resolution gain
/// that independent draws only approach. Deterministic given seed.
std::vector<std::uint32_t> oversample_codes(double true_volts, const OversampleConfig& cfg);

/// Sum of the 4^w dithered conversions, right-shifted by w bits: one code
/// on an (adc_bits + w)-bit scale.
std::uint64_t oversample_decimate(double true_volts, const OversampleConfig& cfg);

/// (code + 0.5) * LSB, the usual mid-tread reading of a floor quantizer.
double base_code_to_volts(std::uint32_t code, const OversampleConfig& cfg);

/// Enhanced code -> volts. The floor quantizer biases each conversion by
/// -1/2 base LSB and the decimation shift drops on average (2^w - 1)/2^(w+1)
/// enhanced LSB, so the unbiasing offset is
///   2^(w-1) + (2^w - 1)/2^(w+1)   enhanced LSB   (= 0.5 at w = 0).
double enhanced_code_to_volts(std::uint64_t code, const OversampleConfig& cfg);

/// The reconstruction offset above, in enhanced-LSB units.
double enhanced_centering_offset(int extra_bits_w);

} // namespace refracto::ovs
