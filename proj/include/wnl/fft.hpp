#pragma once

#include <complex>
#include <vector>

namespace wnl {

/// In-place iterative radix-2 Cooley-Tukey transform. n must be a power of
/// two. inverse = true applies the conjugate transform and divides by n.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

}  // namespace wnl
