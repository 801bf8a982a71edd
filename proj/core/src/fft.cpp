#include "dfe/fft.hpp"

#include <stdexcept>
#include <utility>

namespace dfe {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_power_of_two(std::size_t n) {
    if (n == 0) throw std::invalid_argument("next_power_of_two: n must be >= 1");
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::size_t prev_power_of_two(std::size_t n) {
    if (n == 0) throw std::invalid_argument("prev_power_of_two: n must be >= 1");
    std::size_t p = 1;
    while ((p << 1) <= n) p <<= 1;
    return p;
}

void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");
    if (n < 2) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // one table for the final stage; earlier stages stride through it
    std::vector<std::complex<double>> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> u = a[base + k];
                const std::complex<double> v = a[base + k + half] * w[k * stride];
                a[base + k] = u + v;
                a[base + k + half] = u - v;
            }
        }
    }
}

void ifft_inplace(std::vector<std::complex<double>>& a) {
    for (auto& z : a) z = std::conj(z);
    fft_inplace(a);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& z : a) z = std::conj(z) * inv;
}

std::vector<std::complex<double>> fft_real(std::span<const double> x, std::size_t n_fft) {
    if (!is_power_of_two(n_fft)) throw std::invalid_argument("fft_real: n_fft must be a power of two");
    if (x.size() > n_fft) throw std::invalid_argument("fft_real: input longer than n_fft");
    std::vector<std::complex<double>> a(n_fft);
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
    fft_inplace(a);
    return a;
}

} // namespace dfe
