#include "fobprint/signal_ops.hpp"

#include <cmath>

namespace fobprint {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_inplace(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw InvalidInput("fft length must be a nonzero power of two, got " + std::to_string(n));
    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

template <typename Sig>
static double mean_power_impl(const Sig& sig, const Span& span) {
    check_span(span, sig.size(), "mean_power");
    double acc = 0.0;
    for (std::size_t i = span.begin; i < span.end; ++i) {
        const auto& v = sig.samples[i];
        acc += std::norm(cplx(v));
    }
    return acc / static_cast<double>(span.size());
}

double mean_power(const IqBuffer& sig, const Span& span) { return mean_power_impl(sig, span); }
double mean_power(const PulseSignal& sig, const Span& span) { return mean_power_impl(sig, span); }

Spectrum fft_magnitude(const PulseSignal& sig, const Span& span) {
    check_span(span, sig.size(), "fft_magnitude");
    const std::size_t n = next_pow2(span.size());
    std::vector<cplx> buf(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < span.size(); ++i) buf[i] = cplx(sig.samples[span.begin + i], 0.0);
    fft_inplace(buf);
    Spectrum out;
    out.bin_width_hz = sig.sample_rate_hz / static_cast<double>(n);
    out.first_bin_hz = 0.0;
    out.magnitudes.resize(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) out.magnitudes[k] = std::abs(buf[k]);
    return out;
}

Spectrum fft_magnitude(const IqBuffer& sig, const Span& span) {
    check_span(span, sig.size(), "fft_magnitude");
    const std::size_t n = next_pow2(span.size());
    std::vector<cplx> buf(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < span.size(); ++i) buf[i] = sig.samples[span.begin + i];
    fft_inplace(buf);
    Spectrum out;
    out.bin_width_hz = sig.sample_rate_hz / static_cast<double>(n);
    out.first_bin_hz = -sig.sample_rate_hz / 2.0;
    out.magnitudes.resize(n);
    // ascending frequency: negative half first
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = (k + n / 2) % n;
        out.magnitudes[k] = std::abs(buf[src]);
    }
    return out;
}

std::size_t argmax_bin(const Spectrum& spec, std::size_t first) {
    if (spec.magnitudes.empty() || first >= spec.magnitudes.size())
        throw InvalidSpan("argmax_bin: empty spectrum or start beyond end");
    std::size_t best = first;
    for (std::size_t k = first + 1; k < spec.magnitudes.size(); ++k)
        if (spec.magnitudes[k] > spec.magnitudes[best]) best = k;
    return best;
}

} // namespace fobprint
