#pragma once

#include "fobprint/types.hpp"

namespace fobprint {

std::size_t next_pow2(std::size_t n);

// In-place iterative radix-2 complex FFT. Length must be a power of two.
void fft_inplace(std::vector<cplx>& a, bool inverse = false);

// Mean of |x|^2 over the span.
double mean_power(const IqBuffer& sig, const Span& span);
double mean_power(const PulseSignal& sig, const Span& span);

// Magnitude spectrum of the span, zero-padded to the next power of two.
// Real input: one-sided bins covering [0, fs/2], bin 0 at DC.
// Complex input: full band in ascending frequency order, first bin at -fs/2.
Spectrum fft_magnitude(const PulseSignal& sig, const Span& span);
Spectrum fft_magnitude(const IqBuffer& sig, const Span& span);

// Index of the largest magnitude; ties resolve to the lowest bin.
std::size_t argmax_bin(const Spectrum& spec, std::size_t first = 0);

} // namespace fobprint
