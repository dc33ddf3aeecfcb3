#pragma once

// Shared domain types: sweep schedule, tones, Bloch vectors/trajectories,
// uniformly-sampled time series, and the Rabi control-error correction.
//
// Unit convention: every frequency-like quantity is stored as an angular
// frequency in rad/s. Conversion to ordinary Hz happens only at I/O
// boundaries (config parsing, reports).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lzsa {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline double hz_to_rad(double f) { return two_pi * f; }
inline double rad_to_hz(double w) { return w / two_pi; }

using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Small 3-vector

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

// Spin projections; unit norm for pure-state trajectories.
using BlochVector = Vec3;

// ---------------------------------------------------------------------------
// Sweep schedule: Omega_c(t) = Omega_i + lambda*t

struct SweepConfig {
    double omega_c = 0.0;   // rf carrier, rad/s
    double omega_L = 0.0;   // Larmor frequency, rad/s (documentation only; carrier is resonant)
    double Omega_i = 0.0;   // initial control Rabi frequency, rad/s
    double Omega_f = 0.0;   // final control Rabi frequency, rad/s
    double duration = 0.0;  // s

    double lambda() const { return (Omega_f - Omega_i) / duration; }

    void validate() const {
        if (!(duration > 0.0)) throw std::invalid_argument("SweepConfig: duration must be > 0");
        if (!(Omega_i > 0.0) || !(Omega_f > Omega_i))
            throw std::invalid_argument("SweepConfig: need Omega_f > Omega_i > 0");
        if (!(omega_c > Omega_f))
            throw std::invalid_argument("SweepConfig: carrier must sit above the Rabi band");
    }
};

// ---------------------------------------------------------------------------
// Signal tone
//
// The phase is canonicalized into [0, 2pi) and snapped to a 2^-40 rad grid at
// construction. The snap makes phase periodicity exact: phi and phi + 2pi map
// to the same double (the two differ only by the rounding of the addition,
// ~1e-15, far below the grid pitch), so trajectories and costs are
// bit-identical under phi -> phi + 2pi. The 9e-13 rad granularity is orders
// of magnitude below every phase tolerance in play.

inline double canonical_phase(double phi) {
    if (!std::isfinite(phi)) throw std::invalid_argument("Tone: non-finite phase");
    double r = phi - two_pi * std::floor(phi / two_pi);
    if (r >= two_pi) r -= two_pi;  // guard against floor rounding at the seam
    const double q = 0x1p-40;
    double snapped = std::nearbyint(r / q) * q;
    if (snapped >= two_pi) snapped -= two_pi;
    return snapped;
}

struct Tone {
    double Omega_s = 0.0;  // signal Rabi amplitude, rad/s, >= 0
    double omega_s = 0.0;  // signal angular frequency, rad/s
    double phi_s = 0.0;    // phase, rad, canonical [0, 2pi)

    Tone() = default;
    Tone(double amp, double freq, double phase)
        : Omega_s(amp), omega_s(freq), phi_s(canonical_phase(phase)) {
        if (!(Omega_s >= 0.0)) throw std::invalid_argument("Tone: Omega_s must be >= 0");
    }
};

// ---------------------------------------------------------------------------
// Rabi control-error correction dOmega_c(t)
//
// Cubic piecewise polynomial through samples on a coarse uniform grid
// (default 1 ms), natural end conditions, linear extrapolation beyond the
// ends. Also carries the running integral, needed for frame-2S phases.

class RabiCorrection {
  public:
    RabiCorrection() = default;  // identically zero

    static RabiCorrection zero() { return RabiCorrection(); }

    static RabiCorrection from_samples(double dt, std::vector<double> values, double t0 = 0.0) {
        if (values.size() < 2) throw std::invalid_argument("RabiCorrection: need >= 2 samples");
        if (!(dt > 0.0)) throw std::invalid_argument("RabiCorrection: dt must be > 0");
        RabiCorrection c;
        c.dt_ = dt;
        c.t0_ = t0;
        c.y_ = std::move(values);
        c.build();
        return c;
    }

    bool is_zero() const { return y_.empty(); }

    // dOmega_c(t), rad/s
    double eval(double t) const {
        if (y_.empty()) return 0.0;
        const size_t n = y_.size();
        double u = (t - t0_) / dt_;
        if (u <= 0.0) return y_.front() + d0_ * (u * dt_);
        if (u >= double(n - 1)) return y_.back() + d1_ * ((u - double(n - 1)) * dt_);
        size_t i = std::min(size_t(u), n - 2);
        double s = (u - double(i)) * dt_;
        return y_[i] + s * (b_[i] + s * (c_[i] + s * d_[i]));
    }

    // integral of dOmega_c from t0 to t, rad
    double integral(double t) const {
        if (y_.empty()) return 0.0;
        const size_t n = y_.size();
        double u = (t - t0_) / dt_;
        if (u <= 0.0) {
            double s = u * dt_;
            return y_.front() * s + 0.5 * d0_ * s * s;
        }
        if (u >= double(n - 1)) {
            double s = (u - double(n - 1)) * dt_;
            return cum_.back() + y_.back() * s + 0.5 * d1_ * s * s;
        }
        size_t i = std::min(size_t(u), n - 2);
        double s = (u - double(i)) * dt_;
        return cum_[i] + s * (y_[i] + s * (b_[i] / 2 + s * (c_[i] / 3 + s * d_[i] / 4)));
    }

    double grid_dt() const { return dt_; }
    double grid_t0() const { return t0_; }
    const std::vector<double>& samples() const { return y_; }

  private:
    void build() {
        const size_t n = y_.size();
        // natural cubic spline: solve for second derivatives m[i]
        std::vector<double> m(n, 0.0);
        if (n > 2) {
            std::vector<double> diag(n - 2, 4.0), rhs(n - 2);
            for (size_t i = 0; i + 2 < n; ++i)
                rhs[i] = 6.0 * (y_[i] - 2.0 * y_[i + 1] + y_[i + 2]) / (dt_ * dt_);
            // Thomas algorithm, off-diagonals are 1
            for (size_t i = 1; i < n - 2; ++i) {
                double w = 1.0 / diag[i - 1];
                diag[i] -= w;
                rhs[i] -= w * rhs[i - 1];
            }
            for (size_t i = n - 2; i-- > 0;) {
                double upper = (i + 1 < n - 2) ? m[i + 2] : 0.0;
                m[i + 1] = (rhs[i] - upper) / diag[i];
            }
        }
        b_.resize(n - 1);
        c_.resize(n - 1);
        d_.resize(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            b_[i] = (y_[i + 1] - y_[i]) / dt_ - dt_ * (2.0 * m[i] + m[i + 1]) / 6.0;
            c_[i] = m[i] / 2.0;
            d_[i] = (m[i + 1] - m[i]) / (6.0 * dt_);
        }
        d0_ = b_.front();  // end slopes for linear extrapolation
        d1_ = b_.back() + dt_ * (2.0 * c_.back() + 3.0 * d_.back() * dt_);
        cum_.assign(n, 0.0);
        for (size_t i = 0; i + 1 < n; ++i) {
            double s = dt_;
            cum_[i + 1] = cum_[i] + s * (y_[i] + s * (b_[i] / 2 + s * (c_[i] / 3 + s * d_[i] / 4)));
        }
    }

    double dt_ = 0.0, t0_ = 0.0;
    std::vector<double> y_;            // samples
    std::vector<double> b_, c_, d_;    // per-interval cubic coefficients
    std::vector<double> cum_;          // integral at knots
    double d0_ = 0.0, d1_ = 0.0;       // end slopes
};

// Accumulated control phase theta(t) = Omega_i*t + lambda*t^2/2 + integral(dOmega_c).
inline double control_phase(double t, const SweepConfig& sweep, const RabiCorrection& corr) {
    return (sweep.Omega_i + 0.5 * sweep.lambda() * t) * t + corr.integral(t);
}

// ---------------------------------------------------------------------------
// Bloch trajectory on a uniform grid

enum class Frame { Frame1R, Frame2S };

struct BlochTrajectory {
    Frame frame = Frame::Frame1R;
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<BlochVector> states;

    size_t size() const { return states.size(); }
    double time(size_t i) const { return t0 + dt * double(i); }
    double t_end() const { return states.empty() ? t0 : time(states.size() - 1); }
};

// ---------------------------------------------------------------------------
// Uniformly sampled series. Real and complex variants are distinct types;
// each operation declares which it accepts. valid_t0/valid_t1 bracket the
// samples unaffected by filter edges; comparisons trim to this window.

template <typename T>
struct Series {
    double rate = 0.0;  // samples/s
    double t0 = 0.0;    // s
    std::vector<T> v;
    std::string label;
    double valid_t0 = 0.0, valid_t1 = 0.0;

    Series() = default;
    Series(double rate_, double t0_, std::vector<T> data, std::string lbl = {})
        : rate(rate_), t0(t0_), v(std::move(data)), label(std::move(lbl)) {
        valid_t0 = t0;
        valid_t1 = t_end();
    }

    size_t size() const { return v.size(); }
    double dt() const { return 1.0 / rate; }
    double time(size_t i) const { return t0 + double(i) / rate; }
    double t_end() const { return v.empty() ? t0 : time(v.size() - 1); }

    size_t index_at(double t) const {
        double u = (t - t0) * rate;
        long i = std::lround(u);
        i = std::clamp(i, 0l, long(v.size()) - 1);
        return size_t(i);
    }

    void shrink_valid(double lead, double trail) {
        valid_t0 = std::max(valid_t0, t0 + lead);
        valid_t1 = std::min(valid_t1, t_end() - trail);
    }
};

using RealSeries = Series<double>;
using ComplexSeries = Series<cplx>;

// Trim a series to [a, b] (defaults to its own valid window).
template <typename T>
Series<T> trimmed(const Series<T>& s,
                  double a = std::numeric_limits<double>::quiet_NaN(),
                  double b = std::numeric_limits<double>::quiet_NaN()) {
    if (std::isnan(a)) a = s.valid_t0;
    if (std::isnan(b)) b = s.valid_t1;
    size_t i0 = s.index_at(a), i1 = s.index_at(b);
    if (s.time(i0) < a - 1e-12) ++i0;
    if (s.time(i1) > b + 1e-12 && i1 > 0) --i1;
    if (i1 < i0) throw std::invalid_argument("trimmed: empty window");
    Series<T> out(s.rate, s.time(i0), std::vector<T>(s.v.begin() + i0, s.v.begin() + i1 + 1), s.label);
    return out;
}

inline double l2_norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double rms(const std::vector<double>& v) {
    return v.empty() ? 0.0 : l2_norm(v) / std::sqrt(double(v.size()));
}

// Relative l2 error between aligned sample vectors.
inline double rel_l2_error(const std::vector<double>& got, const std::vector<double>& want) {
    if (got.size() != want.size()) throw std::invalid_argument("rel_l2_error: size mismatch");
    double num = 0, den = 0;
    for (size_t i = 0; i < got.size(); ++i) {
        double d = got[i] - want[i];
        num += d * d;
        den += want[i] * want[i];
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace lzsa
