#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dfe {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

bool is_power_of_two(std::size_t n);

/// Smallest power of two >= n (n >= 1).
std::size_t next_power_of_two(std::size_t n);

/// Largest power of two <= n (n >= 1).
std::size_t prev_power_of_two(std::size_t n);

/// In-place radix-2 transform. The size of `a` must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a);
void ifft_inplace(std::vector<std::complex<double>>& a);

/// Transform of a real sequence zero-padded to n_fft (a power of two,
/// n_fft >= x.size()). Returns all n_fft coefficients.
std::vector<std::complex<double>> fft_real(std::span<const double> x, std::size_t n_fft);

} // namespace dfe
