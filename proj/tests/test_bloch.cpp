#include <doctest.h>

#include <lzsa/bloch.hpp>

#include <cstring>
#include <random>

using namespace lzsa;

namespace {
SweepConfig paper_sweep() {
    return {hz_to_rad(500e3), hz_to_rad(603.5e3), hz_to_rad(7e3), hz_to_rad(13e3), 0.3};
}
// Gentle single-tone reference scenario used for convergence properties:
// everything well resolved at the 8 us step.
SweepConfig gentle_sweep() {
    return {hz_to_rad(5e3), 0.0, two_pi * 70.0, two_pi * 130.0, 0.3};
}
}  // namespace

TEST_CASE("rabi_vector components") {
    SweepConfig s = paper_sweep();
    RabiCorrection none;

    SUBCASE("no tones: pure control ramp") {
        Vec3 o = rabi_vector(0.1, s, {}, none);
        CHECK(o.x == 0.0);
        CHECK(o.y == 0.0);
        CHECK(o.z == doctest::Approx(s.Omega_i + s.lambda() * 0.1).epsilon(1e-14));
    }
    SUBCASE("single tone at cos=1 gives x = 2*Omega_s") {
        Tone tone{two_pi * 22.87, two_pi * 10e3, 0.0};
        Vec3 o = rabi_vector(0.0, s, std::span(&tone, 1), none);
        CHECK(o.x == doctest::Approx(2.0 * two_pi * 22.87).epsilon(1e-14));
    }
    SUBCASE("two equal tones double the x component") {
        Tone t1{two_pi * 10.0, two_pi * 9e3, 0.3};
        std::vector<Tone> both{t1, t1};
        double t = 1.7e-4;
        Vec3 one = rabi_vector(t, s, std::span(&t1, 1), none);
        Vec3 two = rabi_vector(t, s, both, none);
        CHECK(two.x == doctest::Approx(2.0 * one.x).epsilon(1e-14));
    }
    SUBCASE("domain error outside sweep window") {
        CHECK_THROWS_AS(rabi_vector(-0.01, s, {}, none), std::domain_error);
        CHECK_THROWS_AS(rabi_vector(0.31, s, {}, none), std::domain_error);
    }
}

TEST_CASE("bloch_rhs is the cross product") {
    CHECK(norm(bloch_rhs({0, 0, 1}, {0, 0, 5.0})) == 0.0);
    Vec3 r = bloch_rhs({0, 0, 1}, {2.5, 0, 7.0});
    CHECK(r.x == 0.0);
    CHECK(r.y == doctest::Approx(2.5));
    CHECK(r.z == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 20; ++i) {
        Vec3 f{u(rng), u(rng), u(rng)}, om{u(rng), u(rng), u(rng)};
        Vec3 d = bloch_rhs(f, om);
        CHECK(std::abs(dot(d, f)) < 1e-12);
        CHECK(std::abs(dot(d, om)) < 1e-12);
    }
}

TEST_CASE("integrate: zero-signal fixed point and transverse precession") {
    SweepConfig s = paper_sweep();
    RabiCorrection none;

    SUBCASE("eigenstate init stays put exactly") {
        auto traj = integrate(s, {}, none, {0, 0, 1});
        for (const auto& f : traj.states) {
            CHECK(f.x == 0.0);
            CHECK(f.y == 0.0);
            CHECK(f.z == 1.0);
        }
    }
    SUBCASE("zero-signal adiabaticity for spin-down") {
        auto traj = integrate(s, {}, none, {0, 0, -1});
        for (const auto& f : traj.states) CHECK(std::abs(f.z - traj.states[0].z) <= 1e-9);
    }
    SUBCASE("transverse init precesses at the instantaneous control phase") {
        auto traj = integrate(s, {}, none, {1, 0, 0});
        // fz stays zero, transverse phase tracks -theta(t); the two-point Gauss
        // quadrature is exact for the linear ramp so only round-off accumulates
        for (size_t i = 0; i < traj.size(); i += 1000) {
            double th = control_phase(traj.time(i), s, none);
            const auto& f = traj.states[i];
            CHECK(std::abs(f.z) < 1e-12);
            CHECK(f.x == doctest::Approx(std::cos(th)).epsilon(5e-9));
            CHECK(-f.y == doctest::Approx(std::sin(th)).epsilon(5e-9));
        }
    }
}

TEST_CASE("integrate preconditions") {
    SweepConfig s = paper_sweep();
    RabiCorrection none;
    CHECK_THROWS_AS(integrate(s, {}, none, {0, 0, 1.1}), std::invalid_argument);
    CHECK_THROWS_AS(integrate(s, {}, none, {0, 0, 1}, 2e-5), std::invalid_argument);  // 1.6 rad/step
}

TEST_CASE("norm conservation at the reference step") {
    SweepConfig s = paper_sweep();
    RabiCorrection none;
    Tone tone{two_pi * 22.87, two_pi * 10e3, 3.93};
    auto traj = integrate(s, std::span(&tone, 1), none, {1, 0, 0});
    double worst = 0.0;
    for (const auto& f : traj.states) worst = std::max(worst, std::abs(norm(f) - 1.0));
    CHECK(worst <= 1e-6);   // contract
    CHECK(worst <= 1e-12);  // what the geometric integrator actually delivers
}

TEST_CASE("step-halving convergence on the reference single-tone scenario") {
    SweepConfig s = gentle_sweep();
    RabiCorrection none;
    Tone tone{two_pi * 3.0, two_pi * 100.0, 0.7};

    for (auto kind : {Integrator::CF4, Integrator::RK4}) {
        auto a = integrate(s, std::span(&tone, 1), none, {0, 0, 1}, 8e-6, kind);
        auto b = integrate(s, std::span(&tone, 1), none, {0, 0, 1}, 4e-6, kind);
        CHECK(std::abs(a.states.back().z - b.states.back().z) <= 1e-8);
    }
}

TEST_CASE("integrator cross-check: CF4 against RK4 at small step") {
    SweepConfig s = gentle_sweep();
    RabiCorrection none;
    Tone tone{two_pi * 3.0, two_pi * 100.0, 0.7};
    auto a = integrate(s, std::span(&tone, 1), none, {0, 0, 1}, 8e-6, Integrator::CF4);
    auto b = integrate(s, std::span(&tone, 1), none, {0, 0, 1}, 1e-6, Integrator::RK4);
    CHECK(a.states.back().z == doctest::Approx(b.states.back().z).epsilon(1e-9));
}

TEST_CASE("single crossing matches the Landau-Zener asymptote (quick ratio)") {
    // one ratio here as a smoke check; the acceptance suite sweeps all three
    double lambda = two_pi * 20000.0;
    double Omega_s = 0.3 * std::sqrt(lambda);
    double span = 200.0 * Omega_s;
    double Omega_i = two_pi * 3000.0;
    double wres = Omega_i + span;
    double T = 2.0 * span / lambda;
    SweepConfig s{hz_to_rad(500e3), 0.0, Omega_i, Omega_i + 2.0 * span, T};
    RabiCorrection none;

    double s0 = Omega_s / std::hypot(Omega_s, span);
    double c0 = span / std::hypot(Omega_s, span);
    double transfer_sum = 0.0;
    int nphase = 4;
    for (int ip = 0; ip < nphase; ++ip) {
        double phi = two_pi * ip / nphase;
        Tone tone{Omega_s, wres, phi};
        BlochVector init{-s0 * std::cos(phi), s0 * std::sin(phi), c0};
        init = init * (1.0 / norm(init));
        auto traj = integrate(s, std::span(&tone, 1), none, init, 8e-6);
        size_t n = traj.size(), i0 = (3 * n) / 4;
        double acc = 0.0;
        for (size_t i = i0; i < n; ++i) {
            double det = Omega_i + lambda * traj.time(i) - wres;
            double proj = det / std::hypot(det, Omega_s);
            acc += traj.states[i].z / proj;
        }
        transfer_sum += 0.5 * (1.0 - acc / double(n - i0));
    }
    double transfer = transfer_sum / nphase;
    double P = lz_transition_probability(Omega_s, lambda);
    CHECK(std::abs(transfer - P) <= 1e-3);
}

TEST_CASE("lz_transition_probability values") {
    CHECK(lz_transition_probability(0.0, two_pi * 20000.0) == 0.0);
    CHECK(lz_transition_probability(1e6, two_pi * 20000.0) == doctest::Approx(1.0).epsilon(1e-12));
    // frozen oracle: P(2pi*22.87, 2pi*20000) = 1 - exp(-pi^2 * 22.87^2 / 20000)
    CHECK(lz_transition_probability(two_pi * 22.87, two_pi * 20000.0) ==
          doctest::Approx(0.22748848525967356).epsilon(1e-9));
    CHECK_THROWS_AS(lz_transition_probability(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("resonance_time") {
    SweepConfig s = paper_sweep();
    CHECK(resonance_time(s.Omega_i, s) == 0.0);
    CHECK(resonance_time(two_pi * 10e3, s) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(resonance_time(s.Omega_f, s) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(resonance_time(two_pi * 6e3, s), std::domain_error);
}

TEST_CASE("rbw and adiabaticity threshold") {
    SweepConfig s = paper_sweep();
    CHECK(std::abs(rbw(s) - 100.0) < 1e-9);
    SweepConfig s2 = s;
    s2.Omega_f = s.Omega_i + 4.0 * (s.Omega_f - s.Omega_i);  // quadruple lambda
    CHECK(rbw(s2) == doctest::Approx(200.0).epsilon(1e-12));
    // sqrt(lambda) for lambda = 2pi*22500 rad/s^2 is 2pi*59.84 rad/s
    SweepConfig s3{hz_to_rad(500e3), 0.0, hz_to_rad(4e3), hz_to_rad(13e3), 0.4};
    CHECK(s3.lambda() == doctest::Approx(two_pi * 22500.0).epsilon(1e-12));
    CHECK(adiabaticity_threshold(s3) == doctest::Approx(two_pi * 59.84).epsilon(1e-3));
}

TEST_CASE("to_frame_2s freezes free precession and preserves norm") {
    SweepConfig s = paper_sweep();
    RabiCorrection none;
    auto traj = integrate(s, {}, none, {1, 0, 0});
    auto f2s = to_frame_2s(traj, s, none);
    CHECK(f2s.frame == Frame::Frame2S);
    for (size_t i = 0; i < f2s.size(); i += 500) {
        CHECK(f2s.states[i].x == doctest::Approx(1.0).epsilon(5e-9));
        CHECK(std::abs(f2s.states[i].y) < 5e-9);
        CHECK(norm(f2s.states[i]) == doctest::Approx(norm(traj.states[i])).epsilon(1e-14));
    }
    // identity at t=0
    CHECK(f2s.states[0].x == traj.states[0].x);
    CHECK(f2s.states[0].y == traj.states[0].y);
    CHECK_THROWS_AS(to_frame_2s(f2s, s, none), std::domain_error);
}

TEST_CASE("phase symmetry: phi_s + 2pi leaves the trajectory bit-identical") {
    SweepConfig s = gentle_sweep();
    RabiCorrection none;
    Tone a{two_pi * 3.0, two_pi * 100.0, 0.7};
    Tone b{two_pi * 3.0, two_pi * 100.0, 0.7 + two_pi};
    auto ta = integrate(s, std::span(&a, 1), none, {0, 0, 1});
    auto tb = integrate(s, std::span(&b, 1), none, {0, 0, 1});
    REQUIRE(ta.size() == tb.size());
    CHECK(std::memcmp(ta.states.data(), tb.states.data(), ta.size() * sizeof(BlochVector)) == 0);
}

TEST_CASE("frame equivalence is algebraic") {
    SweepConfig s = gentle_sweep();
    RabiCorrection none;
    Tone tone{two_pi * 3.0, two_pi * 100.0, 1.1};
    auto traj = integrate(s, std::span(&tone, 1), none, {0, 0, 1});
    auto f2s = to_frame_2s(traj, s, none);
    // applying the rotation pointwise to the same trajectory is the definition;
    // check a few points independently
    for (size_t i : {size_t(0), traj.size() / 3, traj.size() - 1}) {
        double th = control_phase(traj.time(i), s, none);
        const auto& f = traj.states[i];
        CHECK(f2s.states[i].x == doctest::Approx(std::cos(th) * f.x - std::sin(th) * f.y).epsilon(1e-15));
        CHECK(f2s.states[i].y == doctest::Approx(std::sin(th) * f.x + std::cos(th) * f.y).epsilon(1e-15));
        CHECK(f2s.states[i].z == f.z);
    }
}
