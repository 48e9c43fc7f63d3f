#include "fobprint/dsp.hpp"

#include "fobprint/signal_ops.hpp"

#include <algorithm>
#include <cmath>

namespace fobprint {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double sinc(double x) {
    if (std::fabs(x) < 1e-12) return 1.0;
    return std::sin(x) / x;
}
} // namespace

cplx FirFilter::response_at(double f_hz) const {
    const double w = kTwoPi * f_hz / spec.sample_rate_hz;
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < taps.size(); ++k)
        acc += taps[k] * std::exp(cplx(0.0, -w * static_cast<double>(k)));
    return acc;
}

FirFilter design_fir(const FilterSpec& spec) {
    if (spec.sample_rate_hz <= 0.0) throw InvalidInput("design_fir: sample rate must be positive");
    if (spec.transition_hz <= 0.0) throw InvalidInput("design_fir: transition width must be positive");
    double cutoff = 0.0;   // lowpass prototype cutoff
    double center = 0.0;   // complex modulation frequency
    if (spec.kind == FilterKind::lowpass) {
        cutoff = spec.cutoff_hz;
        if (cutoff <= 0.0 || cutoff >= spec.sample_rate_hz / 2.0)
            throw InvalidInput("design_fir: lowpass cutoff out of (0, fs/2)");
    } else {
        if (!(spec.low_cut_hz < spec.high_cut_hz))
            throw InvalidInput("design_fir: bandpass needs low_cut < high_cut");
        if (spec.high_cut_hz >= spec.sample_rate_hz / 2.0 || spec.low_cut_hz <= -spec.sample_rate_hz / 2.0)
            throw InvalidInput("design_fir: band edges out of (-fs/2, fs/2)");
        cutoff = (spec.high_cut_hz - spec.low_cut_hz) / 2.0;
        center = (spec.high_cut_hz + spec.low_cut_hz) / 2.0;
    }

    std::size_t n = static_cast<std::size_t>(std::ceil(3.3 * spec.sample_rate_hz / spec.transition_hz));
    if (n % 2 == 0) ++n;
    const double m = static_cast<double>(n - 1) / 2.0;

    // Hamming-windowed sinc lowpass prototype, normalized to unit DC gain.
    std::vector<double> proto(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) - m;
        const double w = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1));
        proto[k] = w * (2.0 * cutoff / spec.sample_rate_hz) * sinc(kTwoPi * cutoff * t / spec.sample_rate_hz);
        sum += proto[k];
    }
    for (auto& h : proto) h /= sum;

    FirFilter fir;
    fir.spec = spec;
    fir.taps.resize(n);
    if (spec.kind == FilterKind::lowpass) {
        for (std::size_t k = 0; k < n; ++k) fir.taps[k] = cplx(proto[k], 0.0);
    } else {
        // modulate around the tap center so the passband keeps linear phase
        for (std::size_t k = 0; k < n; ++k) {
            const double ph = kTwoPi * center * (static_cast<double>(k) - m) / spec.sample_rate_hz;
            fir.taps[k] = proto[k] * std::exp(cplx(0.0, ph));
        }
    }
    return fir;
}

IqBuffer shift_frequency(const IqBuffer& sig, double delta_hz) {
    if (sig.sample_rate_hz <= 0.0) throw InvalidInput("shift_frequency: sample rate must be positive");
    IqBuffer out;
    out.sample_rate_hz = sig.sample_rate_hz;
    out.samples.resize(sig.size());
    const double w = -kTwoPi * delta_hz / sig.sample_rate_hz;
    // rotate with a recurrence, renormalizing periodically to hold |r| = 1
    cplx r(1.0, 0.0);
    const cplx step = std::exp(cplx(0.0, w));
    for (std::size_t k = 0; k < sig.size(); ++k) {
        out.samples[k] = sig.samples[k] * r;
        r *= step;
        if ((k & 0x3ff) == 0x3ff) r /= std::abs(r);
    }
    return out;
}

IqBuffer filter_signal(const IqBuffer& sig, const FirFilter& fir) {
    if (sig.size() == 0) throw InvalidInput("filter_signal: empty input");
    if (fir.taps.empty()) throw InvalidInput("filter_signal: empty filter");
    const std::size_t n = sig.size();
    const std::size_t t = fir.taps.size();
    const std::size_t full = n + t - 1;
    const std::size_t nfft = next_pow2(full);

    std::vector<cplx> fx(nfft, cplx(0.0, 0.0));
    std::vector<cplx> fh(nfft, cplx(0.0, 0.0));
    std::copy(sig.samples.begin(), sig.samples.end(), fx.begin());
    std::copy(fir.taps.begin(), fir.taps.end(), fh.begin());
    fft_inplace(fx);
    fft_inplace(fh);
    for (std::size_t k = 0; k < nfft; ++k) fx[k] *= fh[k];
    fft_inplace(fx, true);

    IqBuffer out;
    out.sample_rate_hz = sig.sample_rate_hz;
    out.samples.resize(n);
    const std::size_t half = (t - 1) / 2; // group delay of the linear-phase kernel
    for (std::size_t k = 0; k < n; ++k) out.samples[k] = fx[k + half];
    return out;
}

PulseSignal demodulate(const IqBuffer& sig, const ModulationScheme&) {
    if (sig.size() == 0) throw InvalidInput("demodulate: empty input");
    PulseSignal out;
    out.sample_rate_hz = sig.sample_rate_hz;
    out.samples.resize(sig.size());
    for (std::size_t k = 0; k < sig.size(); ++k) out.samples[k] = std::abs(sig.samples[k]);
    return out;
}

PulseSignal rms_normalize(const PulseSignal& d) {
    if (d.size() == 0) throw InvalidInput("rms_normalize: empty input");
    double acc = 0.0;
    for (double v : d.samples) acc += v * v;
    const double ms = acc / static_cast<double>(d.size());
    if (ms <= 0.0) throw ZeroSignal("rms_normalize: signal has zero power");
    const double inv = 1.0 / std::sqrt(ms);
    PulseSignal out;
    out.sample_rate_hz = d.sample_rate_hz;
    out.samples.resize(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) out.samples[k] = d.samples[k] * inv;
    return out;
}

PulseSignal decimate_boxcar(const PulseSignal& d, std::size_t factor) {
    if (factor == 0) throw InvalidInput("decimate_boxcar: zero factor");
    if (d.size() < factor) throw InvalidInput("decimate_boxcar: signal shorter than one block");
    PulseSignal out;
    out.sample_rate_hz = d.sample_rate_hz / static_cast<double>(factor);
    const std::size_t blocks = d.size() / factor;
    out.samples.resize(blocks);
    const double inv = 1.0 / static_cast<double>(factor);
    for (std::size_t b = 0; b < blocks; ++b) {
        double acc = 0.0;
        const std::size_t base = b * factor;
        for (std::size_t j = 0; j < factor; ++j) acc += d.samples[base + j];
        out.samples[b] = acc * inv;
    }
    return out;
}

PreambleDetection detect_preamble(const PulseSignal& d, std::size_t samples_per_bit,
                                  std::size_t expected_bits, double threshold_factor) {
    const std::size_t w = samples_per_bit;
    if (w == 0 || expected_bits == 0) throw InvalidInput("detect_preamble: zero window or bit count");
    if (d.size() < 2 * w) throw PreambleNotFound("detect_preamble: signal shorter than guard + one bit");

    // prefix sums of squared samples for O(1) window power
    std::vector<double> ps(d.size() + 1, 0.0);
    for (std::size_t k = 0; k < d.size(); ++k) ps[k + 1] = ps[k] + d.samples[k] * d.samples[k];
    auto window_power = [&](std::size_t begin, std::size_t end) {
        return (ps[end] - ps[begin]) / static_cast<double>(end - begin);
    };

    const double guard_power = window_power(0, w);
    const double thresh = threshold_factor * threshold_factor * guard_power;

    std::size_t onset = 0;
    bool found = false;
    for (std::size_t end = w + 1; end <= d.size(); ++end) {
        if (window_power(end - w, end) > thresh) {
            onset = end - 1;
            found = true;
            break;
        }
    }
    if (!found) throw PreambleNotFound("detect_preamble: no window exceeded the guard threshold");
    if (onset < 2 * w)
        throw PreambleNotFound("detect_preamble: onset too early for a clean guard window");
    if (onset + expected_bits * w > d.size())
        throw PreambleNotFound("detect_preamble: expected preamble extends past the buffer");

    PreambleDetection det;
    det.onset = onset;
    det.preamble = Span{onset, onset + expected_bits * w};
    det.guard = Span{0, onset - w};
    return det;
}

} // namespace fobprint
