#pragma once

#include "fobprint/dsp.hpp"
#include "fobprint/types.hpp"

#include <string>
#include <vector>

namespace fobprint {

// Frequency of the strongest envelope spectral line on a zero-padded grid.
// The span mean is removed first and bin 0 is skipped, so the DC mainlobe
// cannot mask the keying line. `pad_points` sets the grid (rounded up to a
// power of two); the effective bin width must resolve sub-bit-rate structure
// or the span is rejected. The argmax is exact over the whole grid: a coarse
// FFT proposes candidates, a direct transform on the fine grid decides.
double peak_frequency(const PulseSignal& d, const Span& span, double bit_rate_bps,
                      std::size_t pad_points = std::size_t{1} << 21);

// Signed frequency of the strongest line in the complex baseband over the
// burst: the residual carrier location. Evaluated on a grid zero-padded to
// at least eight times the span so the estimate resolves carrier scatter.
double carrier_offset(const IqBuffer& baseband, const Span& span);

// 10*log10(max(P_sig - P_noise, eps)/P_noise), capped at +200 dB for a clean
// noise span.
double snr_db(const PulseSignal& d, const Span& signal_span, const Span& noise_span);

// Population kurtosis E[(x-mu)^4]/sigma^4 over the span.
double kurtosis(const PulseSignal& d, const Span& span);

// Sum of |X[f]|^2 over the top four fifths of the representable band,
// f in [0.1*fs, 0.5*fs].
double spectral_brightness(const PulseSignal& d, const Span& span);

struct FeatureVector {
    std::vector<double> values;
};

struct PipelineConfig {
    ModulationScheme mod;
    double sample_rate_hz = 5e6;
    std::size_t expected_bits = 16;
    double detect_threshold = 4.0;
    // The envelope is block-averaged down to this rate before spectral
    // features; keeps the zero-padded transform cheap while the bin width
    // stays far below per-capture clock scatter.
    double spectral_rate_hz = 100e3;
    std::size_t fpeak_pad_points = std::size_t{1} << 21;
    double shift_hz = 0.0;  // optional pre-filter frequency shift
};

// Capture -> feature vector. Filters are designed once at construction.
// Feature order: FSK {f_peak_hz, kurtosis, spectral_brightness, snr_db};
// ASK adds carrier_offset_hz after kurtosis.
class FeaturePipeline {
public:
    explicit FeaturePipeline(const PipelineConfig& cfg);

    FeatureVector extract(const IqBuffer& capture) const;

    const PipelineConfig& config() const { return cfg_; }
    const FirFilter& rx_filter() const { return fir_; }

    static std::vector<std::string> feature_names(Modulation m);

private:
    PipelineConfig cfg_;
    FirFilter fir_;
};

} // namespace fobprint
