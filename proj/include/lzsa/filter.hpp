#pragma once

// Linear-phase FIR building blocks: Kaiser-windowed sinc design, aligned
// (group-delay-compensated) application, polyphase decimation, and
// Savitzky-Golay smoothing/differentiation.
//
// Every kernel here has odd length, so the group delay is an integer number
// of samples and alignment is exact: output sample n is centered on input
// sample n. Edge samples are computed against zero padding and flagged by
// shrinking the series' valid interval by half a kernel on each side.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace lzsa {

// ---------------------------------------------------------------------------
// Kaiser-windowed sinc design

inline double bessel_i0(double x) {
    // power series; converges fast for the beta range used here
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

struct FirKernel {
    std::vector<double> h;  // odd length, symmetric
    int half() const { return int(h.size() / 2); }

    // frequency response magnitude at f (Hz) for sample rate `rate`
    double response(double f, double rate) const {
        double w = two_pi * f / rate;
        int m = half();
        double re = 0.0, im = 0.0;
        for (size_t k = 0; k < h.size(); ++k) {
            re += h[k] * std::cos(w * (double(k) - m));
            im -= h[k] * std::sin(w * (double(k) - m));
        }
        return std::hypot(re, im);
    }
};

// Lowpass with -6 dB point at `cutoff`, transition band `transition` wide,
// stopband attenuation ~atten_db.
inline FirKernel fir_lowpass(double rate, double cutoff, double transition, double atten_db = 80.0) {
    if (!(cutoff > 0.0) || !(cutoff < rate / 2.0))
        throw std::invalid_argument("fir_lowpass: cutoff must lie inside (0, rate/2)");
    if (!(transition > 0.0)) throw std::invalid_argument("fir_lowpass: transition must be > 0");
    double beta;
    if (atten_db > 50.0)
        beta = 0.1102 * (atten_db - 8.7);
    else if (atten_db >= 21.0)
        beta = 0.5842 * std::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0);
    else
        beta = 0.0;
    double delta_w = two_pi * transition / rate;
    int n = int(std::ceil((atten_db - 7.95) / (2.285 * delta_w)));
    if (n % 2 == 1) ++n;  // even order -> odd taps
    int taps = n + 1;
    int m = n / 2;
    double fc = cutoff / rate;  // cycles per sample
    FirKernel k;
    k.h.resize(taps);
    double i0b = bessel_i0(beta);
    double sum = 0.0;
    for (int i = 0; i < taps; ++i) {
        double x = double(i - m);
        double sinc = (x == 0.0) ? 2.0 * fc : std::sin(two_pi * fc * x) / (pi * x);
        double r = x / double(m);
        double win = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        k.h[i] = sinc * win;
        sum += k.h[i];
    }
    for (double& c : k.h) c /= sum;  // exact unity DC gain
    return k;
}

// ---------------------------------------------------------------------------
// Aligned application (same length, integer delay compensated)

template <typename T>
Series<T> fir_apply(const Series<T>& x, const FirKernel& kern) {
    const int m = kern.half();
    const long n = long(x.v.size());
    Series<T> y = x;
    for (long i = 0; i < n; ++i) {
        T acc{};
        for (long k = std::max(0l, i + m - (n - 1)); k <= std::min<long>(kern.h.size() - 1, i + m); ++k)
            acc += kern.h[size_t(k)] * x.v[size_t(i + m - k)];
        y.v[size_t(i)] = acc;
    }
    y.shrink_valid(double(m) / x.rate, double(m) / x.rate);
    return y;
}

// Polyphase decimation: anti-alias FIR + keep every M-th sample, computing
// only the retained outputs. Output sample j sits at input time t0 + j*M/rate.
template <typename T>
Series<T> fir_decimate(const Series<T>& x, const FirKernel& kern, int M) {
    if (M < 1) throw std::invalid_argument("fir_decimate: M must be >= 1");
    const int m = kern.half();
    const long n = long(x.v.size());
    const long nout = (n - 1) / M + 1;
    Series<T> y;
    y.rate = x.rate / M;
    y.t0 = x.t0;
    y.label = x.label;
    y.v.resize(size_t(nout));
    for (long j = 0; j < nout; ++j) {
        long i = j * M;
        T acc{};
        for (long k = std::max(0l, i + m - (n - 1)); k <= std::min<long>(kern.h.size() - 1, i + m); ++k)
            acc += kern.h[size_t(k)] * x.v[size_t(i + m - k)];
        y.v[size_t(j)] = acc;
    }
    y.valid_t0 = std::max(x.valid_t0, x.t0) + double(m) / x.rate;
    y.valid_t1 = std::min(x.valid_t1, x.t_end()) - double(m) / x.rate;
    return y;
}

// Plain block-average decimation (used for cost-grid reduction where both
// sides of a comparison pass through the identical operator).
inline RealSeries block_average(const RealSeries& x, int M) {
    if (M < 1) throw std::invalid_argument("block_average: M must be >= 1");
    RealSeries y;
    y.rate = x.rate / M;
    // block j covers input samples [jM, (j+1)M); its center time:
    y.t0 = x.t0 + 0.5 * double(M - 1) / x.rate;
    y.label = x.label;
    size_t nout = x.v.size() / size_t(M);
    y.v.resize(nout);
    for (size_t j = 0; j < nout; ++j) {
        double acc = 0.0;
        for (size_t k = 0; k < size_t(M); ++k) acc += x.v[j * M + k];
        y.v[j] = acc / double(M);
    }
    y.valid_t0 = std::max(x.valid_t0, y.t0);
    y.valid_t1 = std::min(x.valid_t1, y.t0 + (nout ? double(nout - 1) : 0.0) / y.rate);
    return y;
}

// ---------------------------------------------------------------------------
// Savitzky-Golay

// Least-squares polynomial smoothing kernel (centered, odd window).
// deriv = 0 gives the smoothed value; deriv = 1 the first derivative
// (per sample; divide by dt for physical units).
inline FirKernel savgol_kernel(int window, int order, int deriv = 0) {
    if (window % 2 == 0 || window < 3) throw std::invalid_argument("savgol: window must be odd >= 3");
    if (order < 0 || order >= window) throw std::invalid_argument("savgol: order out of range");
    if (deriv > order) throw std::invalid_argument("savgol: deriv exceeds order");
    const int m = window / 2;
    const int p = order + 1;
    // normal equations G[r][c] = S_{r+c}, S_k = sum_i i^k over i in [-m, m]
    std::vector<double> S(2 * p - 1, 0.0);
    for (int i = -m; i <= m; ++i) {
        double pw = 1.0;
        for (int k = 0; k < 2 * p - 1; ++k) {
            S[k] += pw;
            pw *= i;
        }
    }
    std::vector<std::vector<double>> G(p, std::vector<double>(p));
    for (int r = 0; r < p; ++r)
        for (int c = 0; c < p; ++c) G[r][c] = S[r + c];
    // solve G x = e_deriv * deriv!
    std::vector<double> rhs(p, 0.0);
    double dfact = 1.0;
    for (int i = 2; i <= deriv; ++i) dfact *= i;
    rhs[deriv] = dfact;
    // Gaussian elimination with partial pivoting (p is tiny)
    std::vector<std::vector<double>> Ag = G;
    for (int col = 0; col < p; ++col) {
        int piv = col;
        for (int r = col + 1; r < p; ++r)
            if (std::abs(Ag[r][col]) > std::abs(Ag[piv][col])) piv = r;
        std::swap(Ag[col], Ag[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int r = col + 1; r < p; ++r) {
            double f = Ag[r][col] / Ag[col][col];
            for (int c = col; c < p; ++c) Ag[r][c] -= f * Ag[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> coef(p);
    for (int r = p - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < p; ++c) s -= Ag[r][c] * coef[c];
        coef[r] = s / Ag[r][r];
    }
    // kernel h[k] = sum_j coef[j] * i^j evaluated at i = k - m, flipped for convolution
    FirKernel kern;
    kern.h.resize(window);
    for (int i = -m; i <= m; ++i) {
        double pw = 1.0, val = 0.0;
        for (int j = 0; j < p; ++j) {
            val += coef[j] * pw;
            pw *= i;
        }
        kern.h[size_t(m - i)] = val;  // convolution flip
    }
    return kern;
}

inline RealSeries savgol_smooth(const RealSeries& x, int window, int order) {
    return fir_apply(x, savgol_kernel(window, order, 0));
}

// First derivative in physical units (1/s).
inline RealSeries savgol_derivative(const RealSeries& x, int window, int order) {
    RealSeries y = fir_apply(x, savgol_kernel(window, order, 1));
    for (double& v : y.v) v *= x.rate;
    return y;
}

}  // namespace lzsa
