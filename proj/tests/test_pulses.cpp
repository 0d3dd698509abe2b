#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include <stirap/pulses.hpp>

using namespace stirap;

TEST_CASE("gaussian envelope peaks at the center and decays by 1/e at one width") {
  PulseSpec p;
  p.omega0 = 0.8;
  p.t_center = 70.0;
  p.tau = 100.0;
  CHECK(envelope(p, 70.0) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(envelope(p, 170.0) == doctest::Approx(0.8 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(envelope(p, -30.0) == doctest::Approx(envelope(p, 170.0)).epsilon(1e-15));
  for (double dt : {13.0, 57.0, 140.0})
    CHECK(envelope(p, 70.0 + dt) == doctest::Approx(envelope(p, 70.0 - dt)).epsilon(1e-15));

  p.weight = 0.5;
  CHECK(envelope(p, 70.0) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("envelope derivative matches central differences") {
  PulseSpec p;
  p.omega0 = 1.0;
  p.t_center = -70.0;
  p.tau = 100.0;
  const double h = 1e-4;
  for (double t : {-200.0, -70.0, 0.0, 55.0, 180.0}) {
    const double fd = (envelope(p, t + h) - envelope(p, t - h)) / (2.0 * h);
    CHECK(envelope_dot(p, t) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("chirp offset is linear and zero at the delayed chirp center") {
  PulseSpec p;
  p.chirp = 1e-3;
  p.t_center = -70.0;
  p.chirp_delay = 140.0;
  CHECK(chirp_offset(p, 70.0) == doctest::Approx(0.0).epsilon(1e-18));
  CHECK(chirp_offset(p, 71.0) - chirp_offset(p, 70.0) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(chirp_offset(p, -30.0) == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("accumulated chirp phase is the integral of the offset") {
  PulseSpec p;
  p.chirp = 1e-3;
  p.t_center = -70.0;
  CHECK(chirp_phase(p, 0.0) == doctest::Approx(2.45).epsilon(1e-15));
  const double h = 1e-4;
  for (double t : {-150.0, -70.0, 0.0, 90.0}) {
    const double fd = (chirp_phase(p, t + h) - chirp_phase(p, t - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(chirp_offset(p, t)).epsilon(1e-8));
  }
}

TEST_CASE("instantaneous detunings follow the chirp bookkeeping") {
  PulseSpec pump;
  pump.t_center = 70.0;
  pump.chirp = 1e-3;
  PulseSpec stokes;
  stokes.t_center = -70.0;
  stokes.chirp = 1e-3;

  DetuningSpec d;
  d.Delta = 0.14;
  d.delta = 0.14;

  CHECK(one_photon_detuning(d, pump, 70.0) == doctest::Approx(0.14).epsilon(1e-15));
  CHECK(one_photon_detuning(d, pump, 170.0) == doctest::Approx(0.04).epsilon(1e-12));

  // matched rates compensate the two-photon detuning at every instant
  for (double t : {-300.0, -70.0, 0.0, 70.0, 250.0})
    CHECK(two_photon_detuning(d, pump, stokes, t) == doctest::Approx(0.0).epsilon(1e-15));

  // delaying the stokes chirp by the pulse separation pins it to -delta instead,
  // independent of the common rate
  for (double rate : {1e-3, -2e-3, 5e-4}) {
    PulseSpec p2 = pump, s2 = stokes;
    p2.chirp = rate;
    s2.chirp = rate;
    s2.chirp_delay = 140.0;
    for (double t : {-200.0, 0.0, 140.0, 330.0})
      CHECK(two_photon_detuning(d, p2, s2, t) == doctest::Approx(-0.14).epsilon(1e-12));
  }
}

TEST_CASE("combined stokes field equals the complex component sum") {
  PulseSpec s1;
  s1.omega0 = 1.0;
  s1.t_center = -70.0;
  s1.tau = 100.0;
  s1.chirp = 1e-3;
  PulseSpec s2;
  s2.omega0 = 1.0;
  s2.t_center = 70.0;
  s2.tau = 100.0;
  s2.chirp = 7e-4;
  s2.chirp_delay = -140.0;
  s2.weight = std::cos(0.25 * 3.14159265358979323846);
  const double phi = 0.6;

  for (double t : {-180.0, -70.0, -12.5, 0.0, 34.0, 70.0, 150.0}) {
    const std::complex<double> z =
        envelope(s1, t) * std::exp(std::complex<double>(0.0, chirp_phase(s1, t))) +
        envelope(s2, t) * std::exp(std::complex<double>(0.0, chirp_phase(s2, t) + phi));
    const EffectiveStokes es = effective_stokes(s1, s2, t, phi);
    CHECK(es.amplitude == doctest::Approx(std::abs(z)).epsilon(1e-12));
    if (es.phase_defined) CHECK(es.phase == doctest::Approx(std::arg(z)).epsilon(1e-10));
  }
}

TEST_CASE("equal-weight fractional geometry has the expected midpoint amplitude") {
  PulseSpec s1;
  s1.t_center = -70.0;
  s1.tau = 100.0;
  PulseSpec s2;
  s2.t_center = 70.0;
  s2.tau = 100.0;
  s2.weight = std::cos(0.25 * 3.14159265358979323846);

  const double expected = std::exp(-0.49) * std::sqrt(1.5 + std::sqrt(2.0));
  CHECK(effective_stokes(s1, s2, 0.0).amplitude == doctest::Approx(expected).epsilon(1e-14));

  // opposite static phase interferes destructively instead
  const double opposed = std::exp(-0.49) * (1.0 - std::sqrt(2.0) / 2.0);
  CHECK(effective_stokes(s1, s2, 0.0, 3.14159265358979323846).amplitude ==
        doctest::Approx(opposed).epsilon(1e-12));
}

TEST_CASE("combined stokes phase rate matches the differentiated argument") {
  PulseSpec s1;
  s1.t_center = -70.0;
  s1.tau = 100.0;
  s1.chirp = 1e-3;
  PulseSpec s2;
  s2.t_center = 70.0;
  s2.tau = 100.0;
  s2.chirp = 1e-3;
  s2.chirp_delay = -140.0;
  s2.weight = 0.7;

  auto field = [&](double t) {
    return envelope(s1, t) * std::exp(std::complex<double>(0.0, chirp_phase(s1, t))) +
           envelope(s2, t) * std::exp(std::complex<double>(0.0, chirp_phase(s2, t)));
  };
  const double h = 1e-5;
  for (double t : {-120.0, -40.0, 0.0, 60.0, 130.0}) {
    const EffectiveStokes es = effective_stokes(s1, s2, t);
    REQUIRE(es.phase_defined);
    const double fd = std::arg(field(t + h) * std::conj(field(t - h))) / (2.0 * h);
    CHECK(es.chirp == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("phase flag drops where both components have died off") {
  PulseSpec s1;
  s1.t_center = -70.0;
  s1.tau = 100.0;
  PulseSpec s2 = s1;
  s2.t_center = 70.0;
  const EffectiveStokes es = effective_stokes(s1, s2, -2000.0);
  CHECK_FALSE(es.phase_defined);
  CHECK(es.amplitude < kPhaseFloor);
}

TEST_CASE("sampled phase series unwraps continuously and holds through dead zones") {
  PulseSpec s1;
  s1.t_center = -70.0;
  s1.tau = 100.0;
  s1.chirp = 2e-3;
  PulseSpec s2 = s1;
  s2.t_center = 70.0;
  s2.chirp = -2e-3;
  s2.weight = 0.8;

  const EffectiveStokesSeries ser = effective_stokes_series(s1, s2, -700.0, 700.0);
  REQUIRE(ser.times.size() > 2);
  CHECK(ser.times.front() == -700.0);
  CHECK(ser.times.back() == 700.0);
  for (std::size_t k = 1; k < ser.times.size(); ++k) {
    if (ser.phase_defined[k] && ser.phase_defined[k - 1])
      CHECK(std::abs(ser.phase[k] - ser.phase[k - 1]) < 1.5);
    if (!ser.phase_defined[k]) CHECK(ser.phase[k] == ser.phase[k - 1]);
  }
  // accumulated phase grows well past a single wrap for these rates
  double lo = 1e300, hi = -1e300;
  for (std::size_t k = 0; k < ser.times.size(); ++k) {
    if (!ser.phase_defined[k]) continue;
    lo = std::min(lo, ser.phase[k]);
    hi = std::max(hi, ser.phase[k]);
  }
  CHECK(hi - lo > 6.3);
}
