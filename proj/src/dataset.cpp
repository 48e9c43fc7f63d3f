#include "fobprint/dataset.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fobprint {

namespace {

using json = nlohmann::ordered_json;

template <typename T>
void opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

ModulationScheme mod_from_json(const json& j) {
    ModulationScheme m;
    if (j.contains("kind")) m.kind = modulation_from_name(j.at("kind").get<std::string>());
    opt(j, "bit_rate_bps", m.bit_rate_bps);
    opt(j, "freq_deviation_hz", m.freq_deviation_hz);
    return m;
}

json mod_to_json(const ModulationScheme& m) {
    return json{{"kind", modulation_name(m.kind)},
                {"bit_rate_bps", m.bit_rate_bps},
                {"freq_deviation_hz", m.freq_deviation_hz}};
}

ReceiverConfig rx_from_json(const json& j) {
    ReceiverConfig r;
    opt(j, "sample_rate_hz", r.sample_rate_hz);
    opt(j, "lo_offset_hz", r.lo_offset_hz);
    opt(j, "guard_samples", r.guard_samples);
    opt(j, "tail_samples", r.tail_samples);
    return r;
}

json rx_to_json(const ReceiverConfig& r) {
    return json{{"sample_rate_hz", r.sample_rate_hz},
                {"lo_offset_hz", r.lo_offset_hz},
                {"guard_samples", r.guard_samples},
                {"tail_samples", r.tail_samples}};
}

DeviceProfile device_from_json(const json& j) {
    DeviceProfile d;
    opt(j, "id", d.id);
    opt(j, "clock_offset_ppm", d.clock_offset_ppm);
    opt(j, "carrier_offset_hz", d.carrier_offset_hz);
    opt(j, "amplitude_rise_time_s", d.amplitude_rise_time_s);
    opt(j, "tx_snr_floor_db", d.tx_snr_floor_db);
    opt(j, "preamble_bits", d.preamble_bits);
    return d;
}

json device_to_json(const DeviceProfile& d) {
    return json{{"id", d.id},
                {"clock_offset_ppm", d.clock_offset_ppm},
                {"carrier_offset_hz", d.carrier_offset_hz},
                {"amplitude_rise_time_s", d.amplitude_rise_time_s},
                {"tx_snr_floor_db", d.tx_snr_floor_db},
                {"preamble_bits", d.preamble_bits}};
}

ChannelProfile channel_from_json(const json& j) {
    ChannelProfile c;
    opt(j, "distance_m", c.distance_m);
    opt(j, "reference_distance_m", c.reference_distance_m);
    opt(j, "path_loss_exponent", c.path_loss_exponent);
    if (j.contains("noise_floor_dbfs")) {
        const auto& nf = j.at("noise_floor_dbfs");
        c.noise_floor_dbfs = nf.is_null() ? -std::numeric_limits<double>::infinity()
                                          : nf.get<double>();
    }
    if (j.contains("taps")) {
        c.taps.clear();
        for (const auto& t : j.at("taps")) {
            MultipathTap tap;
            opt(t, "delay_samples", tap.delay_samples);
            double re = 1.0, im = 0.0;
            opt(t, "gain_re", re);
            opt(t, "gain_im", im);
            tap.gain = cplx(re, im);
            c.taps.push_back(tap);
        }
    }
    return c;
}

json channel_to_json(const ChannelProfile& c) {
    json j{{"distance_m", c.distance_m},
           {"reference_distance_m", c.reference_distance_m},
           {"path_loss_exponent", c.path_loss_exponent}};
    if (std::isfinite(c.noise_floor_dbfs))
        j["noise_floor_dbfs"] = c.noise_floor_dbfs;
    else
        j["noise_floor_dbfs"] = nullptr;
    if (!c.taps.empty()) {
        json taps = json::array();
        for (const auto& t : c.taps)
            taps.push_back(json{{"delay_samples", t.delay_samples},
                                {"gain_re", t.gain.real()},
                                {"gain_im", t.gain.imag()}});
        j["taps"] = std::move(taps);
    }
    return j;
}

JitterSpec jitter_from_json(const json& j) {
    JitterSpec s;
    opt(j, "clock_ppm_sigma", s.clock_ppm_sigma);
    opt(j, "carrier_hz_sigma", s.carrier_hz_sigma);
    opt(j, "rise_time_rel_sigma", s.rise_time_rel_sigma);
    opt(j, "amplitude_db_sigma", s.amplitude_db_sigma);
    opt(j, "distance_extra_max_m", s.distance_extra_max_m);
    return s;
}

json jitter_to_json(const JitterSpec& s) {
    return json{{"clock_ppm_sigma", s.clock_ppm_sigma},
                {"carrier_hz_sigma", s.carrier_hz_sigma},
                {"rise_time_rel_sigma", s.rise_time_rel_sigma},
                {"amplitude_db_sigma", s.amplitude_db_sigma},
                {"distance_extra_max_m", s.distance_extra_max_m}};
}

NamedAttack attack_from_json(const json& j) {
    NamedAttack a;
    if (!j.contains("kind")) throw ParseError("scenario: attack entry without a kind");
    a.chain.kind = attack_kind_from_name(j.at("kind").get<std::string>());
    if (a.chain.kind == AttackKind::none)
        throw ParseError("scenario: attack entry cannot have kind 'legit'");
    a.name = attack_kind_name(a.chain.kind);
    opt(j, "name", a.name);
    if (j.contains("channel")) a.chain.channel = channel_from_json(j.at("channel"));
    if (j.contains("recorder_channel"))
        a.recorder_channel = channel_from_json(j.at("recorder_channel"));
    if (j.contains("amplification")) {
        const auto& p = j.at("amplification");
        opt(p, "gain_db", a.chain.amp.gain_db);
        opt(p, "noise_figure_db", a.chain.amp.noise_figure_db);
        opt(p, "analog_prefilter", a.chain.amp.analog_prefilter);
        opt(p, "prefilter_low_hz", a.chain.amp.prefilter_low_hz);
        opt(p, "prefilter_high_hz", a.chain.amp.prefilter_high_hz);
    }
    if (j.contains("digital_relay")) {
        const auto& p = j.at("digital_relay");
        if (p.contains("attacker_device"))
            a.chain.digital.attacker_device = device_from_json(p.at("attacker_device"));
    }
    if (j.contains("playback")) {
        const auto& p = j.at("playback");
        opt(p, "record_sample_rate_hz", a.chain.playback.record_sample_rate_hz);
        opt(p, "adc_bits", a.chain.playback.adc_bits);
        opt(p, "dac_bits", a.chain.playback.dac_bits);
    }
    return a;
}

json attack_to_json(const NamedAttack& a) {
    json j{{"name", a.name}, {"kind", attack_kind_name(a.chain.kind)}};
    j["channel"] = channel_to_json(a.chain.channel);
    switch (a.chain.kind) {
        case AttackKind::amplification:
            j["amplification"] = {{"gain_db", a.chain.amp.gain_db},
                                  {"noise_figure_db", a.chain.amp.noise_figure_db},
                                  {"analog_prefilter", a.chain.amp.analog_prefilter},
                                  {"prefilter_low_hz", a.chain.amp.prefilter_low_hz},
                                  {"prefilter_high_hz", a.chain.amp.prefilter_high_hz}};
            break;
        case AttackKind::digital_relay:
            j["recorder_channel"] = channel_to_json(a.recorder_channel);
            j["digital_relay"] = {
                {"attacker_device", device_to_json(a.chain.digital.attacker_device)}};
            break;
        case AttackKind::playback:
            j["recorder_channel"] = channel_to_json(a.recorder_channel);
            j["playback"] = {{"record_sample_rate_hz", a.chain.playback.record_sample_rate_hz},
                             {"adc_bits", a.chain.playback.adc_bits},
                             {"dac_bits", a.chain.playback.dac_bits}};
            break;
        default:
            break;
    }
    return j;
}

ScenarioConfig scenario_from_json(const json& j) {
    ScenarioConfig cfg;
    opt(j, "seed", cfg.seed);
    opt(j, "nominal_carrier_hz", cfg.nominal_carrier_hz);
    if (j.contains("modulation")) cfg.mod = mod_from_json(j.at("modulation"));
    if (j.contains("receiver")) cfg.rx = rx_from_json(j.at("receiver"));
    if (j.contains("device")) cfg.device = device_from_json(j.at("device"));
    if (j.contains("jitter")) cfg.jitter = jitter_from_json(j.at("jitter"));
    if (j.contains("channel")) cfg.channel = channel_from_json(j.at("channel"));
    if (j.contains("counts")) {
        const auto& c = j.at("counts");
        opt(c, "train", cfg.counts.train);
        opt(c, "legit_test", cfg.counts.legit_test);
        opt(c, "attack", cfg.counts.attack);
    }
    if (j.contains("attacks"))
        for (const auto& a : j.at("attacks")) cfg.attacks.push_back(attack_from_json(a));
    if (j.contains("test_drift")) {
        const auto& d = j.at("test_drift");
        cfg.test_drift.enabled = true;
        opt(d, "enabled", cfg.test_drift.enabled);
        cfg.test_drift.device = d.contains("device") ? device_from_json(d.at("device")) : cfg.device;
        cfg.test_drift.jitter = d.contains("jitter") ? jitter_from_json(d.at("jitter")) : cfg.jitter;
        cfg.test_drift.channel =
            d.contains("channel") ? channel_from_json(d.at("channel")) : cfg.channel;
    }
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["nominal_carrier_hz"] = cfg.nominal_carrier_hz;
    j["modulation"] = mod_to_json(cfg.mod);
    j["receiver"] = rx_to_json(cfg.rx);
    j["device"] = device_to_json(cfg.device);
    j["jitter"] = jitter_to_json(cfg.jitter);
    j["channel"] = channel_to_json(cfg.channel);
    j["counts"] = {{"train", cfg.counts.train},
                   {"legit_test", cfg.counts.legit_test},
                   {"attack", cfg.counts.attack}};
    json attacks = json::array();
    for (const auto& a : cfg.attacks) attacks.push_back(attack_to_json(a));
    j["attacks"] = std::move(attacks);
    if (cfg.test_drift.enabled) {
        j["test_drift"] = {{"enabled", true},
                           {"device", device_to_json(cfg.test_drift.device)},
                           {"jitter", jitter_to_json(cfg.test_drift.jitter)},
                           {"channel", channel_to_json(cfg.test_drift.channel)}};
    }
    return j;
}

} // namespace

ScenarioConfig scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError("scenario: invalid json: " + std::string(e.what()));
    }
    try {
        return scenario_from_json(j);
    } catch (const json::exception& e) {
        throw ParseError("scenario: mistyped field: " + std::string(e.what()));
    }
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("scenario: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_text(ss.str());
}

std::string scenario_to_json_text(const ScenarioConfig& cfg) {
    return scenario_to_json(cfg).dump(2);
}

GeneratedCapture generate_capture(const ScenarioConfig& cfg, const FirFilter* rx_filter,
                                  const std::string& role, const NamedAttack* attack,
                                  std::size_t index) {
    const std::string key = attack ? "attack:" + attack->name : role;
    Rng rng = substream(cfg.seed, key.c_str(), index);

    const bool drifted = attack == nullptr && role == "legit" && cfg.test_drift.enabled;
    const JitterSpec& jit = drifted ? cfg.test_drift.jitter : cfg.jitter;
    const ChannelProfile& legit_ch = drifted ? cfg.test_drift.channel : cfg.channel;

    // Per-capture drift: draws happen unconditionally so the stream layout is
    // identical whatever the sigmas are.
    DeviceProfile dev = drifted ? cfg.test_drift.device : cfg.device;
    dev.clock_offset_ppm += rng.gaussian(0.0, jit.clock_ppm_sigma);
    dev.clock_offset_ppm = std::clamp(dev.clock_offset_ppm, -500.0, 500.0);
    dev.carrier_offset_hz += rng.gaussian(0.0, jit.carrier_hz_sigma);
    dev.amplitude_rise_time_s *=
        std::max(0.0, 1.0 + rng.gaussian(0.0, jit.rise_time_rel_sigma));
    const double amp_db = rng.gaussian(0.0, jit.amplitude_db_sigma);
    const double dist_extra = rng.uniform(0.0, jit.distance_extra_max_m);

    SynthResult syn = synth_preamble(dev, cfg.mod, cfg.rx, rng);
    if (amp_db != 0.0) {
        const double s = std::pow(10.0, amp_db / 20.0);
        for (auto& v : syn.iq.samples) v *= s;
    }

    GeneratedCapture out;
    out.role = role;
    out.index = index;
    out.meta.sample_rate_hz = cfg.rx.sample_rate_hz;
    out.meta.nominal_carrier_hz = cfg.nominal_carrier_hz;
    out.meta.modulation = modulation_name(cfg.mod.kind);
    out.meta.device_id = dev.id;
    out.meta.label = "legit";
    out.meta.seed = cfg.seed;

    if (attack == nullptr) {
        ChannelProfile ch = legit_ch;
        ch.distance_m += dist_extra;
        out.iq = apply_channel(syn.iq, ch, rng);
    } else {
        AttackContext ctx;
        ctx.near_field = &syn.iq;
        ctx.burst = syn.burst();
        ctx.legit_device = &dev;
        ctx.mod = cfg.mod;
        ctx.rx = cfg.rx;
        ctx.recorder_channel = attack->recorder_channel;
        ctx.rx_filter = rx_filter;
        out.iq = apply_attack_chain(ctx, attack->chain, rng);
        out.meta.label = attack_kind_name(attack->chain.kind);
        out.attack_name = attack->name;
        if (attack->chain.kind == AttackKind::digital_relay)
            out.meta.device_id = attack->chain.digital.attacker_device.id;
    }
    round_to_float32(out.iq);
    return out;
}

void generate_scenario(const ScenarioConfig& cfg, const FirFilter* rx_filter,
                       const std::function<void(GeneratedCapture&&)>& sink) {
    for (std::size_t i = 0; i < cfg.counts.train; ++i)
        sink(generate_capture(cfg, rx_filter, "train", nullptr, i));
    for (std::size_t i = 0; i < cfg.counts.legit_test; ++i)
        sink(generate_capture(cfg, rx_filter, "legit", nullptr, i));
    for (const auto& attack : cfg.attacks)
        for (std::size_t i = 0; i < cfg.counts.attack; ++i)
            sink(generate_capture(cfg, rx_filter, "attack", &attack, i));
}

void generate_to_directory(const ScenarioConfig& cfg, const FirFilter* rx_filter,
                           const std::string& dir) {
    std::filesystem::create_directories(dir);
    Manifest man;
    man.mod = cfg.mod;
    man.sample_rate_hz = cfg.rx.sample_rate_hz;
    man.nominal_carrier_hz = cfg.nominal_carrier_hz;
    man.expected_bits = cfg.device.preamble_bits.size();

    generate_scenario(cfg, rx_filter, [&](GeneratedCapture&& cap) {
        char idx[16];
        std::snprintf(idx, sizeof idx, "%04zu", cap.index);
        const std::string stem =
            (cap.role == "attack" ? cap.attack_name : cap.role) + "_" + idx + ".iq";
        write_capture((std::filesystem::path(dir) / stem).string(), cap.iq, cap.meta);
        ManifestEntry e;
        e.file = stem;
        e.label = cap.meta.label;
        e.device_id = cap.meta.device_id;
        e.attack = cap.attack_name;
        man.entries.push_back(std::move(e));
    });
    write_manifest((std::filesystem::path(dir) / "manifest.json").string(), man);
}

} // namespace fobprint
