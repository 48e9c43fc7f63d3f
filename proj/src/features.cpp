#include "fobprint/features.hpp"

#include "fobprint/signal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fobprint {

namespace {

// One bin of the zero-padded spectrum of (x - mean) over the span, evaluated
// directly. pad must be a power of two: the phase index (bin*t) mod pad is
// reduced in exact integer arithmetic so results are reproducible bit for bit.
double padded_bin_magnitude(const std::vector<double>& x, const Span& span, std::uint64_t bin,
                            std::uint64_t pad, double mean) {
    const std::uint64_t mask = pad - 1;
    const double scale = -2.0 * std::numbers::pi / static_cast<double>(pad);
    double re = 0.0, im = 0.0;
    std::uint64_t t = 0;
    for (std::size_t k = span.begin; k < span.end; ++k, ++t) {
        const double v = x[k] - mean;
        const double ang = scale * static_cast<double>((bin * t) & mask);
        re += v * std::cos(ang);
        im += v * std::sin(ang);
    }
    return std::sqrt(re * re + im * im);
}

} // namespace

double peak_frequency(const PulseSignal& d, const Span& span, double bit_rate_bps,
                      std::size_t pad_points) {
    check_span(span, d.size(), "peak_frequency");
    if (span.size() < 16)
        throw SpanTooShort("peak_frequency: span shorter than 16 samples");
    if (!(bit_rate_bps > 0.0))
        throw InvalidInput("peak_frequency: bit rate must be positive");
    if (!(d.sample_rate_hz > 0.0))
        throw InvalidInput("peak_frequency: sample rate must be positive");

    const std::size_t pad = next_pow2(std::max(pad_points, span.size()));
    const double fs = d.sample_rate_hz;
    const double bin_width = fs / static_cast<double>(pad);
    if (bin_width > bit_rate_bps)
        throw SpanTooShort("peak_frequency: span too short to resolve the bit rate on this grid");

    double mean = 0.0;
    for (std::size_t k = span.begin; k < span.end; ++k) mean += d.samples[k];
    mean /= static_cast<double>(span.size());

    // Coarse transform oversampled at least 8x relative to the span's mainlobe
    // width, so the fine-grid argmax always lights up its nearest coarse bin.
    const std::size_t n0 = next_pow2(std::max<std::size_t>(8 * span.size(), 8192));

    if (n0 >= pad) {
        std::vector<cplx> buf(pad, cplx(0.0, 0.0));
        for (std::size_t k = span.begin; k < span.end; ++k)
            buf[k - span.begin] = cplx(d.samples[k] - mean, 0.0);
        fft_inplace(buf);
        std::size_t best = 1;
        double best_mag = std::abs(buf[1]);
        for (std::size_t j = 2; j <= pad / 2; ++j) {
            const double m = std::abs(buf[j]);
            if (m > best_mag) { best_mag = m; best = j; }
        }
        return bin_width * static_cast<double>(best);
    }

    std::vector<cplx> buf(n0, cplx(0.0, 0.0));
    for (std::size_t k = span.begin; k < span.end; ++k)
        buf[k - span.begin] = cplx(d.samples[k] - mean, 0.0);
    fft_inplace(buf);

    std::vector<std::pair<double, std::size_t>> coarse;  // (magnitude, bin)
    coarse.reserve(n0 / 2);
    double bmax = 0.0;
    for (std::size_t c = 1; c <= n0 / 2; ++c) {
        const double m = std::abs(buf[c]);
        coarse.emplace_back(m, c);
        bmax = std::max(bmax, m);
    }
    std::vector<std::size_t> cands;
    for (const auto& [m, c] : coarse)
        if (m * 1.3 >= bmax) cands.push_back(c);
    if (cands.size() > 8) {
        std::stable_sort(cands.begin(), cands.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(buf[a]) > std::abs(buf[b]);
        });
        cands.resize(8);
        std::sort(cands.begin(), cands.end());
    }

    // +/- one coarse bin around each candidate on the fine grid, ranges merged
    const std::size_t ratio = pad / n0;
    std::vector<Span> ranges;
    for (std::size_t c : cands) {
        const std::size_t lo = std::max<std::size_t>(1, (c - 1) * ratio);
        const std::size_t hi = std::min(pad / 2, (c + 1) * ratio) + 1;
        if (!ranges.empty() && lo <= ranges.back().end)
            ranges.back().end = std::max(ranges.back().end, hi);
        else
            ranges.push_back(Span{lo, hi});
    }

    std::size_t best = 0;
    double best_mag = -1.0;
    for (const auto& r : ranges) {
        for (std::size_t j = r.begin; j < r.end; ++j) {
            const double m = padded_bin_magnitude(d.samples, span, j, pad, mean);
            if (m > best_mag) { best_mag = m; best = j; }
        }
    }
    return bin_width * static_cast<double>(best);
}

double carrier_offset(const IqBuffer& baseband, const Span& span) {
    check_span(span, baseband.size(), "carrier_offset");
    if (span.size() < 64)
        throw SpanTooShort("carrier_offset: span shorter than 64 samples");
    // pad to >= 8x the span so the grid resolves well below carrier scatter
    IqBuffer padded;
    padded.sample_rate_hz = baseband.sample_rate_hz;
    padded.samples.assign(next_pow2(span.size() * 8), cplx(0.0, 0.0));
    std::copy(baseband.samples.begin() + static_cast<std::ptrdiff_t>(span.begin),
              baseband.samples.begin() + static_cast<std::ptrdiff_t>(span.end),
              padded.samples.begin());
    const Spectrum spec = fft_magnitude(padded, Span{0, padded.size()});
    return spec.freq_at(argmax_bin(spec));
}

double snr_db(const PulseSignal& d, const Span& signal_span, const Span& noise_span) {
    check_span(signal_span, d.size(), "snr_db signal");
    check_span(noise_span, d.size(), "snr_db noise");
    const double ps = mean_power(d, signal_span);
    const double pn = mean_power(d, noise_span);
    if (pn <= 0.0) return 200.0;
    const double num = std::max(ps - pn, pn * 1e-20);
    return std::min(200.0, 10.0 * std::log10(num / pn));
}

double kurtosis(const PulseSignal& d, const Span& span) {
    check_span(span, d.size(), "kurtosis");
    const auto n = static_cast<double>(span.size());
    double mu = 0.0;
    for (std::size_t k = span.begin; k < span.end; ++k) mu += d.samples[k];
    mu /= n;
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t k = span.begin; k < span.end; ++k) {
        const double dev = d.samples[k] - mu;
        const double dev2 = dev * dev;
        m2 += dev2;
        m4 += dev2 * dev2;
    }
    m2 /= n;
    m4 /= n;
    if (m2 <= 0.0)
        throw DegenerateSignal("kurtosis: zero variance over the span");
    return m4 / (m2 * m2);
}

double spectral_brightness(const PulseSignal& d, const Span& span) {
    check_span(span, d.size(), "spectral_brightness");
    if (span.size() < 16)
        throw SpanTooShort("spectral_brightness: span shorter than 16 samples");
    const Spectrum spec = fft_magnitude(d, span);
    const double f_lo = 0.1 * d.sample_rate_hz - 1e-9;
    double acc = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (spec.freq_at(k) >= f_lo) {
            const double m = spec.magnitudes[k];
            acc += m * m;
        }
    }
    return acc;
}

FeaturePipeline::FeaturePipeline(const PipelineConfig& cfg) : cfg_(cfg) {
    if (!(cfg.sample_rate_hz > 0.0))
        throw InvalidInput("pipeline: sample rate must be positive");
    if (cfg.expected_bits == 0)
        throw InvalidInput("pipeline: expected_bits must be positive");
    if (!(cfg.mod.bit_rate_bps > 0.0))
        throw InvalidInput("pipeline: bit rate must be positive");
    if (!(cfg.spectral_rate_hz > 0.0) || cfg.spectral_rate_hz > cfg.sample_rate_hz)
        throw InvalidInput("pipeline: spectral rate out of range");

    FilterSpec fsp;
    fsp.sample_rate_hz = cfg.sample_rate_hz;
    if (cfg.mod.kind == Modulation::fsk) {
        // pass the mark tone and the keying sidebands around it
        fsp.kind = FilterKind::bandpass;
        fsp.low_cut_hz = cfg.mod.freq_deviation_hz * 0.5;
        fsp.high_cut_hz = cfg.mod.freq_deviation_hz * 1.5;
        fsp.transition_hz = cfg.mod.freq_deviation_hz / 3.0;
    } else {
        fsp.kind = FilterKind::lowpass;
        fsp.cutoff_hz = 20e3;
        fsp.transition_hz = 10e3;
    }
    fir_ = design_fir(fsp);
}

std::vector<std::string> FeaturePipeline::feature_names(Modulation m) {
    if (m == Modulation::fsk)
        return {"f_peak_hz", "kurtosis", "spectral_brightness", "snr_db"};
    return {"f_peak_hz", "kurtosis", "carrier_offset_hz", "spectral_brightness", "snr_db"};
}

FeatureVector FeaturePipeline::extract(const IqBuffer& capture) const {
    if (capture.sample_rate_hz != cfg_.sample_rate_hz)
        throw InvalidInput("pipeline: capture sample rate does not match the pipeline");

    const IqBuffer* src = &capture;
    IqBuffer shifted;
    if (cfg_.shift_hz != 0.0) {
        shifted = shift_frequency(capture, cfg_.shift_hz);
        src = &shifted;
    }

    const IqBuffer y = filter_signal(*src, fir_);
    const PulseSignal d = rms_normalize(demodulate(y, cfg_.mod));

    const auto spb =
        static_cast<std::size_t>(std::llround(cfg_.sample_rate_hz / cfg_.mod.bit_rate_bps));
    const PreambleDetection det =
        detect_preamble(d, spb, cfg_.expected_bits, cfg_.detect_threshold);

    Span noise = det.guard;
    const std::size_t settle = (fir_.size() - 1) / 2;  // skip the filter's edge transient
    noise.begin = std::max(noise.begin, settle);
    if (noise.size() < spb)
        throw PreambleNotFound("pipeline: guard too short for a noise estimate");

    const double snr = snr_db(d, det.preamble, noise);
    const double kurt = kurtosis(d, det.preamble);

    const auto factor =
        static_cast<std::size_t>(std::llround(cfg_.sample_rate_hz / cfg_.spectral_rate_hz));
    double fpk = 0.0, bright = 0.0;
    if (factor > 1) {
        const PulseSignal dec = decimate_boxcar(d, factor);
        const Span dspan{(det.preamble.begin + factor - 1) / factor, det.preamble.end / factor};
        fpk = peak_frequency(dec, dspan, cfg_.mod.bit_rate_bps, cfg_.fpeak_pad_points);
        bright = spectral_brightness(dec, dspan);
    } else {
        fpk = peak_frequency(d, det.preamble, cfg_.mod.bit_rate_bps, cfg_.fpeak_pad_points);
        bright = spectral_brightness(d, det.preamble);
    }

    FeatureVector fv;
    if (cfg_.mod.kind == Modulation::fsk) {
        fv.values = {fpk, kurt, bright, snr};
    } else {
        const double off = carrier_offset(*src, det.preamble);
        fv.values = {fpk, kurt, off, bright, snr};
    }
    return fv;
}

} // namespace fobprint
