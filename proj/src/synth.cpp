#include "fobprint/synth.hpp"

#include "fobprint/signal_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fobprint {

namespace {

void validate_device(const DeviceProfile& dev) {
    if (dev.preamble_bits.empty())
        throw InvalidProfile("device '" + dev.id + "': empty preamble bit string");
    for (char c : dev.preamble_bits)
        if (c != '0' && c != '1')
            throw InvalidProfile("device '" + dev.id + "': preamble bits must be 0/1");
    if (std::abs(dev.clock_offset_ppm) > 500.0)
        throw InvalidProfile("device '" + dev.id + "': |clock offset| > 500 ppm");
    if (dev.amplitude_rise_time_s < 0.0)
        throw InvalidProfile("device '" + dev.id + "': negative rise time");
    if (!(dev.tx_snr_floor_db > 0.0))
        throw InvalidProfile("device '" + dev.id + "': tx snr floor must be positive");
}

void validate_channel(const ChannelProfile& ch) {
    if (!(ch.reference_distance_m > 0.0))
        throw InvalidProfile("channel: reference distance must be positive");
    if (ch.distance_m < ch.reference_distance_m)
        throw InvalidProfile("channel: distance below reference distance");
    if (!(ch.path_loss_exponent > 0.0))
        throw InvalidProfile("channel: path loss exponent must be positive");
    if (!ch.taps.empty()) {
        if (ch.taps.front().delay_samples != 0)
            throw InvalidProfile("channel: first multipath tap must have zero delay");
        for (std::size_t i = 1; i < ch.taps.size(); ++i)
            if (ch.taps[i].delay_samples <= ch.taps[i - 1].delay_samples)
                throw InvalidProfile("channel: multipath delays must be strictly increasing");
    }
}

cplx complex_noise(Rng& rng, double total_power) {
    const double s = std::sqrt(total_power * 0.5);
    return {rng.gaussian() * s, rng.gaussian() * s};
}

} // namespace

SynthResult synth_preamble(const DeviceProfile& dev, const ModulationScheme& mod,
                           const ReceiverConfig& rx, Rng& rng) {
    validate_device(dev);
    if (!(rx.sample_rate_hz > 0.0))
        throw InvalidInput("synth: sample rate must be positive");
    if (!(mod.bit_rate_bps > 0.0))
        throw InvalidInput("synth: bit rate must be positive");

    const double fs = rx.sample_rate_hz;
    const double rate_eff = mod.bit_rate_bps * (1.0 + dev.clock_offset_ppm * 1e-6);
    const double spb_eff = fs / rate_eff;
    const std::size_t nbits = dev.preamble_bits.size();
    const auto burst_len = static_cast<std::size_t>(std::llround(spb_eff * static_cast<double>(nbits)));
    if (burst_len < 8)
        throw InvalidInput("synth: burst shorter than 8 samples");

    SynthResult out;
    out.onset = rx.guard_samples;
    out.burst_len = burst_len;
    out.iq.sample_rate_hz = fs;
    out.iq.samples.assign(rx.guard_samples + burst_len + rx.tail_samples, cplx{0.0, 0.0});

    const double tx_noise_power = std::pow(10.0, -dev.tx_snr_floor_db / 10.0);
    const double rise_n = dev.amplitude_rise_time_s * fs;
    const double two_pi = 2.0 * std::numbers::pi;
    double phase = 0.0;

    for (std::size_t k = 0; k < burst_len; ++k) {
        auto bit_idx = static_cast<std::size_t>(static_cast<double>(k) / spb_eff);
        bit_idx = std::min(bit_idx, nbits - 1);
        const bool bit = dev.preamble_bits[bit_idx] == '1';

        double freq = dev.carrier_offset_hz - rx.lo_offset_hz;
        double amp = 1.0;
        if (mod.kind == Modulation::fsk)
            freq += bit ? mod.freq_deviation_hz : -mod.freq_deviation_hz;
        else
            amp = bit ? 1.0 : 0.0;

        if (rise_n > 0.0)
            amp *= std::min(1.0, (static_cast<double>(k) + 1.0) / rise_n);

        cplx v = std::polar(amp, phase);
        v += complex_noise(rng, tx_noise_power);
        out.iq.samples[out.onset + k] = v;

        phase += two_pi * freq / fs;
        if (phase > 64.0 * two_pi) phase = std::fmod(phase, two_pi);
    }
    return out;
}

double path_loss_db(const ChannelProfile& ch) {
    validate_channel(ch);
    return 10.0 * ch.path_loss_exponent * std::log10(ch.distance_m / ch.reference_distance_m);
}

IqBuffer apply_channel(const IqBuffer& sig, const ChannelProfile& ch, Rng& rng) {
    validate_channel(ch);
    const std::size_t n = sig.samples.size();
    IqBuffer out;
    out.sample_rate_hz = sig.sample_rate_hz;
    out.samples.assign(n, cplx{0.0, 0.0});

    if (ch.taps.empty()) {
        out.samples = sig.samples;
    } else {
        for (const auto& tap : ch.taps) {
            const std::size_t d = tap.delay_samples;
            for (std::size_t k = d; k < n; ++k)
                out.samples[k] += tap.gain * sig.samples[k - d];
        }
    }

    const double scale = std::pow(10.0, -path_loss_db(ch) / 20.0);
    for (auto& v : out.samples) v *= scale;

    if (std::isfinite(ch.noise_floor_dbfs)) {
        const double npow = std::pow(10.0, ch.noise_floor_dbfs / 10.0);
        for (auto& v : out.samples) v += complex_noise(rng, npow);
    }
    return out;
}

IqBuffer quantize_midrise(const IqBuffer& sig, int bits) {
    if (bits < 2 || bits > 24)
        throw InvalidInput("quantizer: bits must be in [2,24]");
    double full = 0.0;
    for (const auto& v : sig.samples)
        full = std::max({full, std::abs(v.real()), std::abs(v.imag())});
    IqBuffer out = sig;
    if (full == 0.0) return out;

    const double levels = std::pow(2.0, bits);
    const double step = 2.0 * full / levels;
    const double lo = -levels / 2.0;
    const double hi = levels / 2.0 - 1.0;
    auto q = [&](double v) {
        double idx = std::floor(v / step);
        idx = std::clamp(idx, lo, hi);
        return step * (idx + 0.5);
    };
    for (auto& v : out.samples) v = {q(v.real()), q(v.imag())};
    return out;
}

IqBuffer resample_linear(const IqBuffer& sig, double new_rate_hz) {
    if (!(new_rate_hz > 0.0))
        throw InvalidInput("resample: target rate must be positive");
    if (sig.samples.empty())
        throw InvalidInput("resample: empty input");
    const std::size_t n = sig.samples.size();
    const double ratio = new_rate_hz / sig.sample_rate_hz;

    IqBuffer out;
    out.sample_rate_hz = new_rate_hz;
    const auto n_out = static_cast<std::size_t>(std::floor(static_cast<double>(n - 1) * ratio)) + 1;
    out.samples.resize(n_out);
    for (std::size_t k = 0; k < n_out; ++k) {
        const double pos = static_cast<double>(k) / ratio;
        const auto i0 = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i0);
        const cplx a = sig.samples[i0];
        const cplx b = (i0 + 1 < n) ? sig.samples[i0 + 1] : a;
        out.samples[k] = a + (b - a) * frac;
    }
    return out;
}

const char* attack_kind_name(AttackKind k) {
    switch (k) {
        case AttackKind::none: return "legit";
        case AttackKind::single_band_relay: return "single_band_relay";
        case AttackKind::amplification: return "amplification";
        case AttackKind::digital_relay: return "digital_relay";
        case AttackKind::playback: return "playback";
    }
    throw InvalidInput("unknown attack kind");
}

AttackKind attack_kind_from_name(const std::string& s) {
    if (s == "legit" || s == "none") return AttackKind::none;
    if (s == "single_band_relay") return AttackKind::single_band_relay;
    if (s == "amplification") return AttackKind::amplification;
    if (s == "digital_relay") return AttackKind::digital_relay;
    if (s == "playback") return AttackKind::playback;
    throw ParseError("unknown attack kind '" + s + "'");
}

std::string decode_bits(const IqBuffer& capture, const ModulationScheme& mod,
                        const FirFilter& fir, std::size_t expected_bits) {
    if (expected_bits == 0)
        throw InvalidInput("decode: expected_bits must be positive");
    PulseSignal d;
    PreambleDetection det;
    try {
        const IqBuffer filtered = filter_signal(capture, fir);
        d = rms_normalize(demodulate(filtered, mod));
        const auto spb =
            static_cast<std::size_t>(std::llround(capture.sample_rate_hz / mod.bit_rate_bps));
        det = detect_preamble(d, spb, expected_bits, 4.0);
    } catch (const Error& e) {
        throw RelayDecodeError(std::string("decode: segmentation failed: ") + e.what());
    }

    const double p_sig = mean_power(d, det.preamble);
    const double p_noise = mean_power(d, det.guard);
    if (p_noise > 0.0 && (p_sig - p_noise) < 10.0 * p_noise)
        throw RelayDecodeError("decode: measured snr below 10 dB");

    const double spb_f = capture.sample_rate_hz / mod.bit_rate_bps;
    std::vector<double> levels(expected_bits, 0.0);
    for (std::size_t b = 0; b < expected_bits; ++b) {
        const auto lo = det.preamble.begin +
                        static_cast<std::size_t>(std::llround((static_cast<double>(b) + 0.25) * spb_f));
        const auto hi = det.preamble.begin +
                        static_cast<std::size_t>(std::llround((static_cast<double>(b) + 0.75) * spb_f));
        if (hi > d.samples.size() || hi <= lo)
            throw RelayDecodeError("decode: bit window out of range");
        double acc = 0.0;
        for (std::size_t k = lo; k < hi; ++k) acc += d.samples[k];
        levels[b] = acc / static_cast<double>(hi - lo);
    }
    const double top = *std::max_element(levels.begin(), levels.end());
    if (!(top > 0.0))
        throw RelayDecodeError("decode: degenerate envelope levels");
    std::string bits(expected_bits, '0');
    for (std::size_t b = 0; b < expected_bits; ++b)
        if (levels[b] > 0.5 * top) bits[b] = '1';
    return bits;
}

namespace {

IqBuffer run_amplification(const AttackContext& ctx, const AttackChain& chain, Rng& rng) {
    const auto& p = chain.amp;
    if (!(p.gain_db >= 0.0))
        throw InvalidInput("amplification: gain must be non-negative");
    if (!(p.noise_figure_db >= 0.0))
        throw InvalidInput("amplification: noise figure must be non-negative");

    IqBuffer x = *ctx.near_field;
    const double fs = x.sample_rate_hz;
    if (p.analog_prefilter &&
        !(p.prefilter_low_hz <= -fs / 2.0 && p.prefilter_high_hz >= fs / 2.0)) {
        FilterSpec spec;
        spec.kind = FilterKind::bandpass;
        spec.sample_rate_hz = fs;
        spec.low_cut_hz = p.prefilter_low_hz;
        spec.high_cut_hz = p.prefilter_high_hz;
        spec.transition_hz = 5e3;
        x = filter_signal(x, design_fir(spec));
    }

    const double g = std::pow(10.0, p.gain_db / 20.0);
    const double f = std::pow(10.0, p.noise_figure_db / 10.0);
    const double ambient = std::isfinite(chain.channel.noise_floor_dbfs)
                               ? std::pow(10.0, chain.channel.noise_floor_dbfs / 10.0)
                               : 0.0;
    const double amp_noise = (f - 1.0) * ambient * g * g;
    for (auto& v : x.samples) {
        v *= g;
        if (amp_noise > 0.0) v += complex_noise(rng, amp_noise);
    }
    return apply_channel(x, chain.channel, rng);
}

IqBuffer run_digital_relay(const AttackContext& ctx, const AttackChain& chain, Rng& rng) {
    if (ctx.rx_filter == nullptr)
        throw InvalidInput("digital relay: no receive filter in context");
    const IqBuffer heard = apply_channel(*ctx.near_field, ctx.recorder_channel, rng);
    const std::string bits =
        decode_bits(heard, ctx.mod, *ctx.rx_filter, ctx.legit_device->preamble_bits.size());

    DeviceProfile attacker = chain.digital.attacker_device;
    attacker.preamble_bits = bits;
    const SynthResult resynth = synth_preamble(attacker, ctx.mod, ctx.rx, rng);
    return apply_channel(resynth.iq, chain.channel, rng);
}

IqBuffer run_playback(const AttackContext& ctx, const AttackChain& chain, Rng& rng) {
    const auto& p = chain.playback;
    if (!(p.record_sample_rate_hz > 0.0))
        throw InvalidInput("playback: record rate must be positive");

    const IqBuffer recorded = apply_channel(*ctx.near_field, ctx.recorder_channel, rng);
    const double fs = recorded.sample_rate_hz;

    IqBuffer replica = recorded;
    if (p.record_sample_rate_hz != fs) {
        replica = resample_linear(replica, p.record_sample_rate_hz);
        replica = quantize_midrise(replica, p.adc_bits);
        replica = resample_linear(replica, fs);
    } else {
        replica = quantize_midrise(replica, p.adc_bits);
    }
    replica = quantize_midrise(replica, p.dac_bits);

    // Replayer keys its transmitter only around the burst; interpolation smears
    // the edges by up to two record-rate periods, so widen the keep window.
    const auto pad = 2 * static_cast<std::size_t>(std::ceil(fs / p.record_sample_rate_hz)) + 16;
    const std::size_t keep_lo = ctx.burst.begin > pad ? ctx.burst.begin - pad : 0;
    const std::size_t keep_hi = std::min(replica.samples.size(), ctx.burst.end + pad);
    for (std::size_t k = 0; k < replica.samples.size(); ++k)
        if (k < keep_lo || k >= keep_hi) replica.samples[k] = {0.0, 0.0};

    replica.samples.resize(ctx.near_field->samples.size(), cplx{0.0, 0.0});
    return apply_channel(replica, chain.channel, rng);
}

} // namespace

IqBuffer apply_attack_chain(const AttackContext& ctx, const AttackChain& chain, Rng& rng) {
    if (ctx.near_field == nullptr || ctx.legit_device == nullptr)
        throw InvalidInput("attack chain: incomplete context");
    check_span(ctx.burst, ctx.near_field->samples.size(), "attack chain burst");

    switch (chain.kind) {
        case AttackKind::none:
        case AttackKind::single_band_relay:
            // A one-band analog relay just moves the transmit point: the victim
            // sees the same waveform through a longer path.
            return apply_channel(*ctx.near_field, chain.channel, rng);
        case AttackKind::amplification:
            return run_amplification(ctx, chain, rng);
        case AttackKind::digital_relay:
            return run_digital_relay(ctx, chain, rng);
        case AttackKind::playback:
            return run_playback(ctx, chain, rng);
    }
    throw InvalidInput("attack chain: unknown kind");
}

} // namespace fobprint
