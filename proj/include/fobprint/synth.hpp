#pragma once

#include "fobprint/dsp.hpp"
#include "fobprint/rng.hpp"
#include "fobprint/types.hpp"

#include <optional>

namespace fobprint {

// Fixed per-device hardware traits.
struct DeviceProfile {
    std::string id = "fob";
    double clock_offset_ppm = 0.0;       // bit clock deviation, |ppm| <= 500
    double carrier_offset_hz = 0.0;      // TX carrier error relative to nominal
    double amplitude_rise_time_s = 0.0;  // PA ramp at burst start
    double tx_snr_floor_db = 60.0;       // device's own wideband noise below unit TX amplitude
    std::string preamble_bits = "1010101010101010";
};

struct MultipathTap {
    std::size_t delay_samples = 0;
    cplx gain{1.0, 0.0};
};

struct ChannelProfile {
    double distance_m = 1.0;
    double reference_distance_m = 1.0;
    double path_loss_exponent = 2.0;
    std::vector<MultipathTap> taps;  // empty = single path; first tap must have delay 0
    // Per-sample complex noise power relative to full scale (1.0). -inf disables noise.
    double noise_floor_dbfs = -std::numeric_limits<double>::infinity();
};

struct ReceiverConfig {
    double sample_rate_hz = 5e6;
    double lo_offset_hz = 0.0;        // receiver LO error relative to nominal carrier
    std::size_t guard_samples = 15000;
    std::size_t tail_samples = 4000;
};

struct SynthResult {
    IqBuffer iq;
    std::size_t onset = 0;      // ground truth first burst sample
    std::size_t burst_len = 0;  // ground truth burst length in samples
    Span burst() const { return Span{onset, onset + burst_len}; }
};

// Baseband preamble burst as emitted by the device: guard silence, phase-continuous
// FSK/ASK keying with clock skew, carrier offset, amplitude ramp and the device's
// own noise floor over the burst. The receiver LO offset is folded in, so the
// result is the signal as the victim receiver would mix it down.
SynthResult synth_preamble(const DeviceProfile& dev, const ModulationScheme& mod,
                           const ReceiverConfig& rx, Rng& rng);

// Log-distance path loss, optional sparse multipath FIR, additive receiver noise.
IqBuffer apply_channel(const IqBuffer& sig, const ChannelProfile& ch, Rng& rng);

double path_loss_db(const ChannelProfile& ch);

// Mid-rise uniform quantizer over +/- max(|I|,|Q|), applied to I and Q. bits in [2,24].
IqBuffer quantize_midrise(const IqBuffer& sig, int bits);

// Linear-interpolation rate conversion. Deliberately has no anti-alias or
// reconstruction filtering (models a crude recorder/replayer front end).
IqBuffer resample_linear(const IqBuffer& sig, double new_rate_hz);

enum class AttackKind { none, single_band_relay, amplification, digital_relay, playback };

struct AmplificationParams {
    double gain_db = 60.0;
    double noise_figure_db = 3.2;
    bool analog_prefilter = false;
    // Prefilter band in baseband terms. Wider than Nyquist = transparent.
    double prefilter_low_hz = -55e6;
    double prefilter_high_hz = 55e6;
};

struct DigitalRelayParams {
    DeviceProfile attacker_device;
};

struct PlaybackParams {
    double record_sample_rate_hz = 100e3;
    int adc_bits = 8;
    int dac_bits = 8;
};

struct AttackChain {
    AttackKind kind = AttackKind::none;
    AmplificationParams amp;
    DigitalRelayParams digital;
    PlaybackParams playback;
    // Path from the attack's transmit point to the victim receiver.
    ChannelProfile channel;
};

const char* attack_kind_name(AttackKind k);
AttackKind attack_kind_from_name(const std::string& s);

// Inputs an attack chain needs about the victim signal and how the adversary hears it.
struct AttackContext {
    const IqBuffer* near_field = nullptr;        // clean fob emission (device noise only)
    Span burst;                                  // ground-truth burst span within near_field
    const DeviceProfile* legit_device = nullptr;
    ModulationScheme mod;
    ReceiverConfig rx;
    ChannelProfile recorder_channel;             // fob -> adversary electronics
    const FirFilter* rx_filter = nullptr;        // needed by the digital relay's demodulator
};

IqBuffer apply_attack_chain(const AttackContext& ctx, const AttackChain& chain, Rng& rng);

// Decode the preamble bit string from a received capture (filter, envelope,
// onset detection, per-bit slicing). Throws RelayDecodeError when the capture
// is too noisy to segment or slice confidently.
std::string decode_bits(const IqBuffer& capture, const ModulationScheme& mod,
                        const FirFilter& fir, std::size_t expected_bits);

} // namespace fobprint
