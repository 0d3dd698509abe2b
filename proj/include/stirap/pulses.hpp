#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace stirap {

enum class PulseRole { Pump, Stokes1, Stokes2 };

// Linearly chirped Gaussian pulse. All rates are in units of the unit frequency,
// all times in its inverse.
struct PulseSpec {
  double omega0 = 1.0;       // peak Rabi frequency
  double t_center = 0.0;     // envelope center
  double tau = 100.0;        // 1/e half-width of the envelope
  double chirp = 0.0;        // linear chirp rate
  double chirp_delay = 0.0;  // chirp center offset relative to t_center
  double weight = 1.0;       // branching factor (sin A, cos A, or 1)
  PulseRole role = PulseRole::Pump;
};

// Static detunings of a scheme.
struct DetuningSpec {
  double Delta = 0.0;             // one-photon detuning of the intermediate level
  double delta = 0.0;             // two-photon detuning of the target level
  double level4_splitting = 0.0;  // resonant level sits this far above the detuned one
};

inline double envelope(const PulseSpec& p, double t) {
  const double u = (t - p.t_center) / p.tau;
  return p.weight * p.omega0 * std::exp(-u * u);
}

inline double envelope_dot(const PulseSpec& p, double t) {
  return envelope(p, t) * (-2.0 * (t - p.t_center) / (p.tau * p.tau));
}

// Instantaneous frequency offset due to the chirp.
inline double chirp_offset(const PulseSpec& p, double t) {
  return p.chirp * (t - p.t_center - p.chirp_delay);
}

// Accumulated chirp phase (time integral of chirp_offset).
inline double chirp_phase(const PulseSpec& p, double t) {
  const double u = t - p.t_center - p.chirp_delay;
  return 0.5 * p.chirp * u * u;
}

inline double one_photon_detuning(const DetuningSpec& d, const PulseSpec& pump, double t) {
  return d.Delta - chirp_offset(pump, t);
}

inline double two_photon_detuning(const DetuningSpec& d, const PulseSpec& pump,
                                  const PulseSpec& stokes, double t) {
  return -d.delta + chirp_offset(stokes, t) - chirp_offset(pump, t);
}

// Amplitude below which the phase of the combined Stokes field is indeterminate.
inline constexpr double kPhaseFloor = 1e-12;

// Two chirped Stokes components combined into one complex field
// z(t) = A1 e^{i phi1} + A2 e^{i phi2}.
struct EffectiveStokes {
  double amplitude = 0.0;
  double phase = 0.0;  // arg z, wrapped; use effective_stokes_series for unwrapping
  double chirp = 0.0;  // d(arg z)/dt, analytic
  bool phase_defined = true;
};

inline EffectiveStokes effective_stokes(const PulseSpec& s1, const PulseSpec& s2, double t,
                                        double static_phase = 0.0) {
  const double a1 = envelope(s1, t);
  const double a2 = envelope(s2, t);
  const double p1 = chirp_phase(s1, t);
  const double p2 = chirp_phase(s2, t) + static_phase;
  const std::complex<double> z =
      a1 * std::exp(std::complex<double>(0.0, p1)) + a2 * std::exp(std::complex<double>(0.0, p2));

  EffectiveStokes out;
  out.amplitude = std::abs(z);
  if (out.amplitude < kPhaseFloor) {
    out.phase_defined = false;
    return out;
  }
  out.phase = std::arg(z);

  // d(arg z)/dt from Im(z' conj(z))/|z|^2, expanded in the two real components.
  const double b1 = chirp_offset(s1, t);
  const double b2 = chirp_offset(s2, t);
  const double dphi = p1 - p2;
  const double da1 = envelope_dot(s1, t);
  const double da2 = envelope_dot(s2, t);
  const double num = a1 * a1 * b1 + a2 * a2 * b2 + a1 * a2 * (b1 + b2) * std::cos(dphi) +
                     (da1 * a2 - a1 * da2) * std::sin(dphi);
  out.chirp = num / (out.amplitude * out.amplitude);
  return out;
}

struct EffectiveStokesSeries {
  std::vector<double> times;
  std::vector<double> amplitude;
  std::vector<double> phase;  // unwrapped; held at last defined value where indeterminate
  std::vector<double> chirp;
  std::vector<std::uint8_t> phase_defined;
};

// Samples the combined field on a uniform grid and unwraps the phase.
// The step must stay well below the fastest phase variation; 0.05 is safe for
// the chirp rates considered here.
inline EffectiveStokesSeries effective_stokes_series(const PulseSpec& s1, const PulseSpec& s2,
                                                     double t0, double t1, double dt = 0.05) {
  EffectiveStokesSeries out;
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / dt)) + 1;
  out.times.reserve(n);
  out.amplitude.reserve(n);
  out.phase.reserve(n);
  out.chirp.reserve(n);
  out.phase_defined.reserve(n);

  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double last_phase = 0.0;
  bool have_phase = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (i + 1 == n) ? t1 : t0 + static_cast<double>(i) * dt;
    const EffectiveStokes p = effective_stokes(s1, s2, t);
    double phase = last_phase;
    if (p.phase_defined) {
      if (have_phase) {
        double d = p.phase - std::fmod(last_phase, kTwoPi);
        d -= kTwoPi * std::round(d / kTwoPi);
        phase = last_phase + d;
      } else {
        phase = p.phase;
        have_phase = true;
      }
      last_phase = phase;
    }
    out.times.push_back(t);
    out.amplitude.push_back(p.amplitude);
    out.phase.push_back(phase);
    out.chirp.push_back(p.chirp);
    out.phase_defined.push_back(p.phase_defined ? 1 : 0);
  }
  return out;
}

}  // namespace stirap
