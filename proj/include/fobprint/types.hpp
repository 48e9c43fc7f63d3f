#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fobprint {

using cplx = std::complex<double>;

// Base for all toolkit errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidSpan : Error { using Error::Error; };
struct InvalidProfile : Error { using Error::Error; };
struct InvalidInput : Error { using Error::Error; };
struct ZeroSignal : Error { using Error::Error; };
struct PreambleNotFound : Error { using Error::Error; };
struct SpanTooShort : Error { using Error::Error; };
struct DegenerateSignal : Error { using Error::Error; };
struct RelayDecodeError : Error { using Error::Error; };
struct InvalidTrainingSet : Error { using Error::Error; };
struct TrainingFailed : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct TruncatedFile : Error { using Error::Error; };
struct ManifestError : Error { using Error::Error; };
struct RankingError : Error { using Error::Error; };

// Half-open sample index range [begin, end).
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end > begin ? end - begin : 0; }
    bool empty() const { return end <= begin; }
};

// Complex baseband capture.
struct IqBuffer {
    std::vector<cplx> samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return samples.size(); }
};

// Real, non-negative demodulated pulse train.
struct PulseSignal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return samples.size(); }
};

// Magnitude spectrum. Bins run first_bin_hz, first_bin_hz + bin_width_hz, ...
struct Spectrum {
    std::vector<double> magnitudes;
    double bin_width_hz = 0.0;
    double first_bin_hz = 0.0;

    double freq_at(std::size_t bin) const { return first_bin_hz + bin_width_hz * static_cast<double>(bin); }
    std::size_t size() const { return magnitudes.size(); }
};

enum class Modulation { fsk, ask };

struct ModulationScheme {
    Modulation kind = Modulation::fsk;
    double bit_rate_bps = 3000.0;
    // FSK only: tone offset from the carrier for bit 1 (+) and bit 0 (-).
    double freq_deviation_hz = 30000.0;
};

inline const char* modulation_name(Modulation m) { return m == Modulation::fsk ? "fsk" : "ask"; }

inline Modulation modulation_from_name(const std::string& s) {
    if (s == "fsk") return Modulation::fsk;
    if (s == "ask") return Modulation::ask;
    throw ParseError("unknown modulation: " + s);
}

inline void check_span(const Span& s, std::size_t n, const char* what) {
    if (s.empty() || s.end > n)
        throw InvalidSpan(std::string(what) + ": span [" + std::to_string(s.begin) + "," +
                          std::to_string(s.end) + ") invalid for length " + std::to_string(n));
}

} // namespace fobprint
