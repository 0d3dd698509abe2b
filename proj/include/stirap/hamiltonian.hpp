#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "stirap/errors.hpp"
#include "stirap/linalg.hpp"
#include "stirap/scenario.hpp"

namespace stirap {

struct HermitianSample {
  double t = 0.0;
  CMat H;
};

// Static phase between the two Stokes components plus the difference of their
// accumulated chirp phases. Constant whenever both chirps vanish, and constant
// for equal rates with the delay pair chosen so the quadratic terms cancel.
inline double eta_phase(const ScenarioSpec& s, double t) {
  if (!scheme_has_second_stokes(s.scheme))
    throw ConfigError("scheme", "eta_phase needs a two-component Stokes field");
  return s.phi + chirp_phase(s.stokes1, t) - chirp_phase(*s.stokes2, t);
}

// Combined Stokes coupling entering row 2 of the Hamiltonian. Real for the
// single-component schemes; for a split Stokes the second component is rotated
// by the static phase alone (unchirped) or by the full relative chirp phase.
inline Cplx stokes_coupling(const ScenarioSpec& s, double t) {
  const double a1 = envelope(s.stokes1, t);
  if (!s.stokes2) return Cplx(a1, 0.0);
  const double a2 = envelope(*s.stokes2, t);
  const double ph = (s.scheme == Scheme::FSTIRAP3) ? s.phi : eta_phase(s, t);
  return a1 + a2 * std::exp(Cplx(0.0, ph));
}

// Time derivative of stokes_coupling, analytic.
inline Cplx stokes_coupling_dot(const ScenarioSpec& s, double t) {
  const double da1 = envelope_dot(s.stokes1, t);
  if (!s.stokes2) return Cplx(da1, 0.0);
  const double a2 = envelope(*s.stokes2, t);
  const double da2 = envelope_dot(*s.stokes2, t);
  if (s.scheme == Scheme::FSTIRAP3)
    return da1 + da2 * std::exp(Cplx(0.0, s.phi));
  const double eta = eta_phase(s, t);
  const double eta_dot = chirp_offset(s.stokes1, t) - chirp_offset(*s.stokes2, t);
  return da1 + (da2 + kImag * a2 * eta_dot) * std::exp(Cplx(0.0, eta));
}

// Hamiltonian in the field-interaction frame, rotating-wave approximation,
// hbar = 1. Diagonals carry the instantaneous detunings; chirp phases of a
// single-component Stokes are absorbed into the diagonal, while the relative
// phase of a split Stokes stays on the coupling.
inline CMat hamiltonian_at(const ScenarioSpec& s, double t) {
  const int dim = s.dimension();
  CMat H = CMat::Zero(dim, dim);
  const double op = envelope(s.pump, t);
  const Cplx os = stokes_coupling(s, t);

  double d2;  // intermediate-level diagonal (times 2)
  double d3;  // target-level diagonal (times 2)
  if (s.scheme == Scheme::FSTIRAP3) {
    d2 = 2.0 * s.detunings.Delta;
    d3 = -2.0 * s.detunings.delta;
  } else {
    d2 = 2.0 * one_photon_detuning(s.detunings, s.pump, t);
    d3 = 2.0 * two_photon_detuning(s.detunings, s.pump, s.stokes1, t);
  }

  H(0, 1) = 0.5 * op;
  H(1, 0) = 0.5 * op;
  H(1, 1) = 0.5 * d2;
  if (dim == 3) {
    H(1, 2) = 0.5 * os;
    H(2, 1) = 0.5 * std::conj(os);
    H(2, 2) = 0.5 * d3;
  } else {
    // One Stokes field couples the intermediate level to both final levels;
    // the resonant one sits level4_splitting above the detuned one.
    H(1, 2) = 0.5 * os;
    H(2, 1) = 0.5 * std::conj(os);
    H(1, 3) = 0.5 * os;
    H(3, 1) = 0.5 * std::conj(os);
    H(2, 2) = 0.5 * (d3 + 2.0 * s.detunings.level4_splitting);
    H(3, 3) = 0.5 * d3;
  }
  return H;
}

// Analytic dH/dt: Gaussian envelope derivatives plus constant chirp slopes.
inline CMat hamiltonian_dot_at(const ScenarioSpec& s, double t) {
  const int dim = s.dimension();
  CMat dH = CMat::Zero(dim, dim);
  const double dop = envelope_dot(s.pump, t);
  const Cplx dos = stokes_coupling_dot(s, t);

  double dd2 = 0.0;
  double dd3 = 0.0;
  if (s.scheme != Scheme::FSTIRAP3) {
    dd2 = -2.0 * s.pump.chirp;
    dd3 = 2.0 * (s.stokes1.chirp - s.pump.chirp);
  }

  dH(0, 1) = 0.5 * dop;
  dH(1, 0) = 0.5 * dop;
  dH(1, 1) = 0.5 * dd2;
  if (dim == 3) {
    dH(1, 2) = 0.5 * dos;
    dH(2, 1) = 0.5 * std::conj(dos);
    dH(2, 2) = 0.5 * dd3;
  } else {
    dH(1, 2) = 0.5 * dos;
    dH(2, 1) = 0.5 * std::conj(dos);
    dH(1, 3) = 0.5 * dos;
    dH(3, 1) = 0.5 * std::conj(dos);
    dH(2, 2) = 0.5 * dd3;
    dH(3, 3) = 0.5 * dd3;
  }
  return dH;
}

// Finite-difference fallback for dH/dt; the analytic form above is preferred,
// this one backs it in tests and for future schemes without closed forms.
inline CMat hamiltonian_dot_fd(const ScenarioSpec& s, double t, double h = 1e-3) {
  return (hamiltonian_at(s, t + h) - hamiltonian_at(s, t - h)) / (2.0 * h);
}

// Closed-form instantaneous eigenvalues of a two-photon-resonant three-level
// scheme: {lower bright, dark (exactly zero), upper bright}.
inline std::array<double, 3> analytic_dressed_energies(const ScenarioSpec& s, double t) {
  if (s.dimension() != 3)
    throw ConfigError("scheme", "analytic dressed energies require a 3-level scheme");
  const CMat H = hamiltonian_at(s, t);
  const double d3 = 2.0 * H(2, 2).real();
  if (std::abs(d3) > 1e-9)
    throw ConfigError("delta", "analytic dressed energies require two-photon resonance");
  const double Dt = H(1, 1).real();
  const double op = 2.0 * std::abs(H(0, 1));
  const double os = 2.0 * std::abs(H(1, 2));
  const double root = std::sqrt(Dt * Dt + op * op + os * os);
  return {0.5 * (Dt - root), 0.0, 0.5 * (Dt + root)};
}

// Secular quartic of the 4-level schemes, split into the field-free part f0
// (roots are the four diagonal entries in the doubled-energy convention,
// i.e. eigenvalues of 2H) and the field-induced part f1 proportional to the
// squared Rabi couplings. f = f0 + f1 = det(lambda I - 2 H(t)).
struct QuarticValue {
  double f = 0.0;
  double f0 = 0.0;
  double f1 = 0.0;
};

inline QuarticValue quartic_eval(const ScenarioSpec& s, double t, double lambda) {
  if (s.dimension() != 4) throw ConfigError("scheme", "secular quartic is a 4-level diagnostic");
  const CMat H = hamiltonian_at(s, t);
  const double d2 = 2.0 * H(1, 1).real();
  const double d3 = 2.0 * H(2, 2).real();
  const double d4 = 2.0 * H(3, 3).real();
  const double op2 = std::norm(2.0 * H(0, 1));
  const double os2 = std::norm(2.0 * H(1, 2));

  QuarticValue out;
  out.f0 = lambda * (lambda - d2) * (lambda - d3) * (lambda - d4);
  out.f1 = -os2 * lambda * ((lambda - d3) + (lambda - d4)) - op2 * (lambda - d3) * (lambda - d4);
  out.f = out.f0 + out.f1;
  return out;
}

// Monic coefficients of the same quartic, constant term first. Used to scale
// residuals when checking eigenvalues against the characteristic polynomial.
inline std::array<double, 5> quartic_coefficients(const ScenarioSpec& s, double t) {
  const CMat H = hamiltonian_at(s, t);
  const double d2 = 2.0 * H(1, 1).real();
  const double d3 = 2.0 * H(2, 2).real();
  const double d4 = 2.0 * H(3, 3).real();
  const double op2 = std::norm(2.0 * H(0, 1));
  const double os2 = std::norm(2.0 * H(1, 2));

  // f0 = lambda (lambda - d2) (lambda - d3) (lambda - d4)
  const double e1 = d2 + d3 + d4;
  const double e2 = d2 * d3 + d2 * d4 + d3 * d4;
  const double e3 = d2 * d3 * d4;
  std::array<double, 5> c{0.0, -e3, e2, -e1, 1.0};
  // f1 = -os2 lambda (2 lambda - d3 - d4) - op2 (lambda - d3)(lambda - d4)
  c[2] += -2.0 * os2 - op2;
  c[1] += os2 * (d3 + d4) + op2 * (d3 + d4);
  c[0] += -op2 * d3 * d4;
  return c;
}

// The split-Stokes 4-level Hamiltonian with the two components collapsed into
// one real field of time-dependent amplitude. The phase of the combined
// coupling is removed by the gauge diag(1, 1, e^{-i gamma}, e^{-i gamma}),
// which shifts the final-level diagonals by its rate; the result propagates
// the same populations and |coherences| as the exact form.
inline CMat effective_form_hamiltonian_at(const ScenarioSpec& s, double t) {
  if (s.scheme != Scheme::CFSTIRAP4)
    throw ConfigError("scheme", "effective-form Hamiltonian is defined for CFSTIRAP4");
  const double a1 = envelope(s.stokes1, t);
  const double a2 = envelope(*s.stokes2, t);
  const double da1 = envelope_dot(s.stokes1, t);
  const double da2 = envelope_dot(*s.stokes2, t);
  const double eta = eta_phase(s, t);
  const double eta_dot = chirp_offset(s.stokes1, t) - chirp_offset(*s.stokes2, t);
  const double mag2 = a1 * a1 + a2 * a2 + 2.0 * a1 * a2 * std::cos(eta);
  // gamma = arg(a1 + a2 e^{i eta}); rate from Im(w' conj w)/|w|^2
  double gamma_dot = 0.0;
  if (mag2 > kPhaseFloor * kPhaseFloor)
    gamma_dot = (std::sin(eta) * (a1 * da2 - da1 * a2) +
                 eta_dot * a2 * (a1 * std::cos(eta) + a2)) /
                mag2;

  const double op = envelope(s.pump, t);
  const double d2 = 2.0 * one_photon_detuning(s.detunings, s.pump, t);
  const double d3 =
      2.0 * (two_photon_detuning(s.detunings, s.pump, s.stokes1, t) - gamma_dot);
  const double os = std::sqrt(std::max(mag2, 0.0));

  CMat H = CMat::Zero(4, 4);
  H(0, 1) = 0.5 * op;
  H(1, 0) = 0.5 * op;
  H(1, 1) = 0.5 * d2;
  H(1, 2) = 0.5 * os;
  H(2, 1) = 0.5 * os;
  H(1, 3) = 0.5 * os;
  H(3, 1) = 0.5 * os;
  H(2, 2) = 0.5 * (d3 + 2.0 * s.detunings.level4_splitting);
  H(3, 3) = 0.5 * d3;
  return H;
}

}  // namespace stirap
