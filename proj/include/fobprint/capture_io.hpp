#pragma once

#include "fobprint/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fobprint {

// Sidecar metadata stored next to each capture as <capture>.json.
struct CaptureMeta {
    double sample_rate_hz = 0.0;
    double nominal_carrier_hz = 0.0;
    std::string modulation = "fsk";
    std::string device_id;
    std::string label = "legit";
    std::uint64_t seed = 0;
};

struct Capture {
    IqBuffer iq;
    CaptureMeta meta;
};

extern const std::vector<std::string> kCaptureLabels;
bool is_valid_label(const std::string& label);

// Interleaved float32 little-endian I,Q pairs plus the JSON sidecar.
void write_capture(const std::string& path, const IqBuffer& iq, const CaptureMeta& meta);
Capture read_capture(const std::string& path);

// Quantize each component to the nearest float32. Captures are stored as
// float32, so in-memory pipelines apply this at generation time too: a
// capture read back from disk is bit-identical to the one that was scored
// in memory.
void round_to_float32(IqBuffer& iq);

struct ManifestEntry {
    std::string file;  // relative to the manifest's directory
    std::string label = "legit";
    std::string device_id;
    std::string attack;  // attack set name, empty for legit entries
};

struct Manifest {
    ModulationScheme mod;
    double sample_rate_hz = 0.0;
    double nominal_carrier_hz = 0.0;
    std::size_t expected_bits = 16;
    std::vector<ManifestEntry> entries;
};

void write_manifest(const std::string& path, const Manifest& m);
Manifest read_manifest(const std::string& path);

// Resolve a manifest entry against the manifest file's directory.
std::string resolve_entry_path(const std::string& manifest_path, const ManifestEntry& entry);

} // namespace fobprint
