#pragma once

#include "fobprint/types.hpp"

namespace fobprint {

enum class FilterKind { lowpass, bandpass };

struct FilterSpec {
    FilterKind kind = FilterKind::lowpass;
    double sample_rate_hz = 0.0;
    double cutoff_hz = 0.0;      // lowpass
    double low_cut_hz = 0.0;     // bandpass (one-sided, complex taps)
    double high_cut_hz = 0.0;
    double transition_hz = 0.0;
};

// Windowed-sinc FIR (Hamming). A bandpass design carries complex taps that
// pass only the positive-frequency band [low_cut, high_cut]; a lowpass design
// has real-valued symmetric taps.
struct FirFilter {
    std::vector<cplx> taps;
    FilterSpec spec;

    std::size_t size() const { return taps.size(); }
    // complex frequency response at f (Hz), evaluated directly from the taps
    cplx response_at(double f_hz) const;
};

FirFilter design_fir(const FilterSpec& spec);

// Multiply by exp(-j*2*pi*delta*t): content at +delta_hz moves to DC.
IqBuffer shift_frequency(const IqBuffer& sig, double delta_hz);

// Exact linear convolution via FFT, group-delay compensated: output sample k
// is the filter response centered on input sample k, so the buffer keeps its
// length and timeline. The first and last (taps-1)/2 samples see a partial
// kernel (convolution edges are truncated at the buffer boundary).
IqBuffer filter_signal(const IqBuffer& sig, const FirFilter& fir);

// Magnitude envelope. Precondition: sig already band-limited per scheme
// (one-sided bandpass for FSK, lowpass for ASK), so envelope detection
// covers both demodulations.
PulseSignal demodulate(const IqBuffer& sig, const ModulationScheme& mod);

// Scale so the mean squared sample is exactly 1.
PulseSignal rms_normalize(const PulseSignal& d);

// Boxcar average over non-overlapping blocks of `factor` samples.
PulseSignal decimate_boxcar(const PulseSignal& d, std::size_t factor);

struct PreambleDetection {
    std::size_t onset = 0;  // first sample of the detected preamble
    Span preamble;          // expected_bits * samples_per_bit starting at onset
    Span guard;             // leading noise-only region usable for noise estimates
};

// Onset = first index where the RMS of the trailing one-bit window exceeds
// threshold_factor times the RMS of the leading one-bit guard window.
PreambleDetection detect_preamble(const PulseSignal& d, std::size_t samples_per_bit,
                                  std::size_t expected_bits, double threshold_factor = 4.0);

} // namespace fobprint
