#include "fobprint/capture_io.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace fobprint {

namespace {

using json = nlohmann::ordered_json;

void put_f32le(std::string& out, float v) {
    std::uint32_t u = 0;
    std::memcpy(&u, &v, 4);
    out.push_back(static_cast<char>(u & 0xff));
    out.push_back(static_cast<char>((u >> 8) & 0xff));
    out.push_back(static_cast<char>((u >> 16) & 0xff));
    out.push_back(static_cast<char>((u >> 24) & 0xff));
}

float get_f32le(const unsigned char* p) {
    const std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                            (static_cast<std::uint32_t>(p[1]) << 8) |
                            (static_cast<std::uint32_t>(p[2]) << 16) |
                            (static_cast<std::uint32_t>(p[3]) << 24);
    float v = 0.0f;
    std::memcpy(&v, &u, 4);
    return v;
}

std::string sidecar_path(const std::string& capture_path) { return capture_path + ".json"; }

} // namespace

const std::vector<std::string> kCaptureLabels = {
    "legit", "single_band_relay", "amplification", "digital_relay", "playback"};

bool is_valid_label(const std::string& label) {
    return std::find(kCaptureLabels.begin(), kCaptureLabels.end(), label) != kCaptureLabels.end();
}

void write_capture(const std::string& path, const IqBuffer& iq, const CaptureMeta& meta) {
    if (!is_valid_label(meta.label))
        throw ManifestError("capture: unknown label '" + meta.label + "'");
    std::string blob;
    blob.reserve(iq.samples.size() * 8);
    for (const auto& v : iq.samples) {
        put_f32le(blob, static_cast<float>(v.real()));
        put_f32le(blob, static_cast<float>(v.imag()));
    }
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw TruncatedFile("capture: cannot open '" + path + "' for writing");
        out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
        if (!out) throw TruncatedFile("capture: write to '" + path + "' failed");
    }
    json j;
    j["sample_rate_hz"] = meta.sample_rate_hz;
    j["nominal_carrier_hz"] = meta.nominal_carrier_hz;
    j["modulation"] = meta.modulation;
    j["device_id"] = meta.device_id;
    j["label"] = meta.label;
    j["seed"] = meta.seed;
    std::ofstream out(sidecar_path(path), std::ios::binary);
    if (!out) throw TruncatedFile("capture: cannot open sidecar for '" + path + "'");
    out << j.dump(2) << '\n';
}

Capture read_capture(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw TruncatedFile("capture: cannot open '" + path + "'");
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes == 0 || bytes % 8 != 0)
        throw TruncatedFile("capture: '" + path + "' is not a whole number of I/Q pairs");
    in.seekg(0);
    std::vector<unsigned char> blob(bytes);
    in.read(reinterpret_cast<char*>(blob.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw TruncatedFile("capture: short read from '" + path + "'");

    Capture cap;
    cap.iq.samples.resize(bytes / 8);
    for (std::size_t k = 0; k < cap.iq.samples.size(); ++k)
        cap.iq.samples[k] = cplx(get_f32le(&blob[8 * k]), get_f32le(&blob[8 * k + 4]));

    std::ifstream sin(sidecar_path(path), std::ios::binary);
    if (!sin) throw ParseError("capture: missing sidecar '" + sidecar_path(path) + "'");
    json j;
    try {
        sin >> j;
        cap.meta.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        cap.meta.nominal_carrier_hz = j.at("nominal_carrier_hz").get<double>();
        cap.meta.modulation = j.at("modulation").get<std::string>();
        cap.meta.device_id = j.at("device_id").get<std::string>();
        cap.meta.label = j.at("label").get<std::string>();
        cap.meta.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ParseError("capture: bad sidecar '" + sidecar_path(path) + "': " + e.what());
    }
    if (!(cap.meta.sample_rate_hz > 0.0))
        throw ParseError("capture: sidecar has non-positive sample rate");
    if (!is_valid_label(cap.meta.label))
        throw ManifestError("capture: sidecar has unknown label '" + cap.meta.label + "'");
    modulation_from_name(cap.meta.modulation);  // validates
    cap.iq.sample_rate_hz = cap.meta.sample_rate_hz;
    return cap;
}

void round_to_float32(IqBuffer& iq) {
    for (auto& v : iq.samples)
        v = cplx(static_cast<double>(static_cast<float>(v.real())),
                 static_cast<double>(static_cast<float>(v.imag())));
}

void write_manifest(const std::string& path, const Manifest& m) {
    if (m.entries.empty()) throw ManifestError("manifest: no entries");
    json j;
    j["format"] = "rf-print-manifest";
    j["version"] = 1;
    j["modulation"] = {{"kind", modulation_name(m.mod.kind)},
                       {"bit_rate_bps", m.mod.bit_rate_bps},
                       {"freq_deviation_hz", m.mod.freq_deviation_hz}};
    j["sample_rate_hz"] = m.sample_rate_hz;
    j["nominal_carrier_hz"] = m.nominal_carrier_hz;
    j["expected_bits"] = m.expected_bits;
    json entries = json::array();
    for (const auto& e : m.entries) {
        if (!is_valid_label(e.label))
            throw ManifestError("manifest: unknown label '" + e.label + "'");
        json row;
        row["file"] = e.file;
        row["label"] = e.label;
        row["device_id"] = e.device_id;
        if (!e.attack.empty()) row["attack"] = e.attack;
        entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ManifestError("manifest: cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw ManifestError("manifest: write to '" + path + "' failed");
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError("manifest: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ManifestError("manifest: invalid json: " + std::string(e.what()));
    }
    Manifest m;
    try {
        if (j.at("format").get<std::string>() != "rf-print-manifest")
            throw ManifestError("manifest: unrecognized format tag");
        if (j.at("version").get<int>() != 1)
            throw ManifestError("manifest: unsupported version");
        const auto& mod = j.at("modulation");
        m.mod.kind = modulation_from_name(mod.at("kind").get<std::string>());
        m.mod.bit_rate_bps = mod.at("bit_rate_bps").get<double>();
        m.mod.freq_deviation_hz = mod.at("freq_deviation_hz").get<double>();
        m.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        m.nominal_carrier_hz = j.at("nominal_carrier_hz").get<double>();
        m.expected_bits = j.at("expected_bits").get<std::size_t>();
        for (const auto& row : j.at("entries")) {
            ManifestEntry e;
            e.file = row.at("file").get<std::string>();
            e.label = row.at("label").get<std::string>();
            e.device_id = row.at("device_id").get<std::string>();
            if (row.contains("attack")) e.attack = row.at("attack").get<std::string>();
            if (!is_valid_label(e.label))
                throw ManifestError("manifest: unknown label '" + e.label + "'");
            m.entries.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw ManifestError("manifest: missing or mistyped field: " + std::string(e.what()));
    }
    if (m.entries.empty()) throw ManifestError("manifest: no entries");
    if (!(m.sample_rate_hz > 0.0) || !(m.mod.bit_rate_bps > 0.0) || m.expected_bits == 0)
        throw ManifestError("manifest: non-positive signal parameters");
    return m;
}

std::string resolve_entry_path(const std::string& manifest_path, const ManifestEntry& entry) {
    const std::filesystem::path p(entry.file);
    if (p.is_absolute()) return entry.file;
    return (std::filesystem::path(manifest_path).parent_path() / p).string();
}

} // namespace fobprint
