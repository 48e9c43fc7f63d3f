#pragma once

#include "fobprint/capture_io.hpp"
#include "fobprint/synth.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fobprint {

// Per-capture scatter applied on top of the fixed device/channel profiles:
// the device traits stay what the hardware is, these model shot-to-shot drift
// (crystal temperature, battery, posture). Gaussian unless noted.
struct JitterSpec {
    double clock_ppm_sigma = 0.0;
    double carrier_hz_sigma = 0.0;
    double rise_time_rel_sigma = 0.0;   // relative wobble of the PA ramp
    double amplitude_db_sigma = 0.0;    // TX level wobble
    double distance_extra_max_m = 0.0;  // uniform [0, max] added to the channel distance
};

struct NamedAttack {
    std::string name;  // attack set name used in reports/manifests
    AttackChain chain;
    ChannelProfile recorder_channel;  // how the adversary hears the fob
};

struct ScenarioCounts {
    std::size_t train = 100;
    std::size_t legit_test = 100;
    std::size_t attack = 100;
};

// Optional environment drift applied to the legitimate *test* set only, so a
// model trained under nominal conditions can be evaluated against changed
// propagation or device behavior (shadowing, temperature, battery sag).
struct TestDrift {
    bool enabled = false;
    DeviceProfile device;
    JitterSpec jitter;
    ChannelProfile channel;
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    double nominal_carrier_hz = 433.92e6;
    ModulationScheme mod;
    ReceiverConfig rx;
    DeviceProfile device;
    JitterSpec jitter;
    ChannelProfile channel;  // legit propagation path
    ScenarioCounts counts;
    std::vector<NamedAttack> attacks;
    TestDrift test_drift;
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const ScenarioConfig& cfg);

// One generated capture, already rounded to float32 resolution.
struct GeneratedCapture {
    IqBuffer iq;
    CaptureMeta meta;
    std::string role;         // "train", "legit" or "attack"
    std::string attack_name;  // set name when role == "attack"
    std::size_t index = 0;    // position within its set
};

// One capture of the scenario. role is "train", "legit" or "attack"; the
// substream key is the role (or "attack:<name>") plus the index, so a capture
// is reproducible in isolation. Legit-test drift applies when role=="legit"
// and cfg.test_drift is enabled.
GeneratedCapture generate_capture(const ScenarioConfig& cfg, const FirFilter* rx_filter,
                                  const std::string& role, const NamedAttack* attack,
                                  std::size_t index);

// Streams every capture of the scenario through `sink` in a fixed order:
// train set, legitimate test set, then each attack set. Each capture draws
// from its own substream of cfg.seed, so sets are independent and stable
// under count changes elsewhere. `rx_filter` is only dereferenced by attacks
// that demodulate (the digital relay); pass the scoring pipeline's filter.
void generate_scenario(const ScenarioConfig& cfg, const FirFilter* rx_filter,
                       const std::function<void(GeneratedCapture&&)>& sink);

// Generate to a directory: captures plus a manifest named manifest.json.
void generate_to_directory(const ScenarioConfig& cfg, const FirFilter* rx_filter,
                           const std::string& dir);

} // namespace fobprint
