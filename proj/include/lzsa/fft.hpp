#pragma once

// Iterative radix-2 FFT, power-of-two lengths only. Callers pad to
// next_pow2; that is always acceptable here (Hilbert transforms, spectra,
// line estimation on guard-trimmed records).

#include <complex>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace lzsa {

inline size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

inline void fft_inplace(std::vector<cplx>& a, bool inverse = false) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: length must be a power of two");
    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = two_pi / double(len) * (inverse ? 1.0 : -1.0);
        cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx t = w * a[i + k + len / 2];
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        double inv = 1.0 / double(n);
        for (cplx& x : a) x *= inv;
    }
}

inline std::vector<cplx> fft(std::vector<cplx> a) {
    fft_inplace(a);
    return a;
}

inline std::vector<cplx> ifft(std::vector<cplx> a) {
    fft_inplace(a, true);
    return a;
}

// FFT of a real vector zero-padded to a power of two (>= n).
inline std::vector<cplx> fft_real_padded(const std::vector<double>& x, size_t min_len = 0) {
    size_t m = next_pow2(std::max(x.size(), min_len));
    std::vector<cplx> a(m, cplx(0.0));
    for (size_t i = 0; i < x.size(); ++i) a[i] = x[i];
    fft_inplace(a);
    return a;
}

}  // namespace lzsa
