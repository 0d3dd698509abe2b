#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "stirap/errors.hpp"
#include "stirap/linalg.hpp"
#include "stirap/pulses.hpp"

namespace stirap {

enum class Scheme {
  STIRAP3,
  CSTIRAP3,
  CSTIRAP4,
  FSTIRAP3,
  CFSTIRAP3,
  CFSTIRAP4,
  FSTIRAP3_SINGLE_STOKES,
};

constexpr int scheme_dimension(Scheme s) {
  return (s == Scheme::CSTIRAP4 || s == Scheme::CFSTIRAP4) ? 4 : 3;
}

// Schemes whose Stokes field is the sum of two delayed components.
constexpr bool scheme_has_second_stokes(Scheme s) {
  return s == Scheme::FSTIRAP3 || s == Scheme::CFSTIRAP3 || s == Scheme::CFSTIRAP4;
}

constexpr bool scheme_is_chirped(Scheme s) {
  return s == Scheme::CSTIRAP3 || s == Scheme::CSTIRAP4 || s == Scheme::CFSTIRAP3 ||
         s == Scheme::CFSTIRAP4;
}

inline const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::STIRAP3: return "STIRAP3";
    case Scheme::CSTIRAP3: return "CSTIRAP3";
    case Scheme::CSTIRAP4: return "CSTIRAP4";
    case Scheme::FSTIRAP3: return "FSTIRAP3";
    case Scheme::CFSTIRAP3: return "CFSTIRAP3";
    case Scheme::CFSTIRAP4: return "CFSTIRAP4";
    case Scheme::FSTIRAP3_SINGLE_STOKES: return "FSTIRAP3_SINGLE_STOKES";
  }
  return "?";
}

inline std::optional<Scheme> scheme_from_name(std::string_view name) {
  for (Scheme s : {Scheme::STIRAP3, Scheme::CSTIRAP3, Scheme::CSTIRAP4, Scheme::FSTIRAP3,
                   Scheme::CFSTIRAP3, Scheme::CFSTIRAP4, Scheme::FSTIRAP3_SINGLE_STOKES}) {
    if (name == scheme_name(s)) return s;
  }
  return std::nullopt;
}

// Fully resolved simulation scenario. Pulse weights already carry the Stokes
// branching factors, so the Hamiltonian builders read pulses verbatim.
struct ScenarioSpec {
  Scheme scheme = Scheme::STIRAP3;
  DetuningSpec detunings;
  PulseSpec pump;
  PulseSpec stokes1;
  std::optional<PulseSpec> stokes2;
  double A = 1.5707963267948966;  // Stokes branching angle
  double phi = 0.0;               // static phase between the Stokes components
  double t_start = 0.0;
  double t_end = 0.0;
  bool auto_window = true;  // window derived from the pulses, re-derived on parameter sweeps
  CVec initial_state;

  int dimension() const { return scheme_dimension(scheme); }

  void validate() const;
};

// Integration window wide enough for every envelope to decay to ~1e-7 of its
// peak on the way in and even less on the way out.
inline std::pair<double, double> default_window(const ScenarioSpec& s) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  auto take = [&](const PulseSpec& p) {
    lo = std::min(lo, p.t_center - 4.0 * p.tau);
    hi = std::max(hi, p.t_center + 5.0 * p.tau);
  };
  take(s.pump);
  take(s.stokes1);
  if (s.stokes2) take(*s.stokes2);
  return {lo, hi};
}

// At least 2001 output samples and a spacing no coarser than 0.5, fine enough
// for spectral tracking of every scheme treated here.
inline int default_sample_count(double t_start, double t_end) {
  const int by_step = static_cast<int>(std::ceil((t_end - t_start) / 0.5)) + 1;
  return std::max(2001, by_step);
}

inline CVec ground_state(int dim) {
  CVec v = CVec::Zero(dim);
  v[0] = Cplx(1.0, 0.0);
  return v;
}

inline void ScenarioSpec::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError(field, msg);
  };
  auto check_pulse = [&](const PulseSpec& p, const std::string& which) {
    if (!(p.tau > 0.0)) fail(which + ".tau", "must be > 0");
    if (!(p.omega0 >= 0.0)) fail(which + ".omega0", "must be >= 0");
    if (p.weight < 0.0 || p.weight > 1.0) fail(which + ".weight", "must be in [0, 1]");
    if (!std::isfinite(p.chirp) || !std::isfinite(p.chirp_delay) || !std::isfinite(p.t_center))
      fail(which, "non-finite parameter");
  };
  check_pulse(pump, "pump");
  check_pulse(stokes1, "stokes1");
  if (stokes2) check_pulse(*stokes2, "stokes2");
  if (scheme_has_second_stokes(scheme) != stokes2.has_value())
    fail("stokes2", scheme_has_second_stokes(scheme) ? "required for this scheme"
                                                     : "not applicable to this scheme");
  if (A < 0.0 || A > 1.5707963267948967) fail("A", "must be in [0, pi/2]");
  if (!(t_start < t_end)) fail("t_start", "window must satisfy t_start < t_end");
  const int dim = dimension();
  if (initial_state.size() != dim) fail("initial_state", "dimension mismatch");
  if (std::abs(initial_state.norm() - 1.0) > 1e-9) fail("initial_state", "must be normalized");
}

// Flat knob set from which every scheme's ScenarioSpec is assembled; this is
// the single front door used by the config layer, the presets and the tests.
struct ScenarioOptions {
  Scheme scheme = Scheme::STIRAP3;
  double omega0 = 1.0;
  double tau = 100.0;
  double t_p = 70.0;
  double t_s = -70.0;
  // Per-pulse overrides for the independent-pulse schemes; NaN inherits omega0/tau.
  double pump_omega0 = std::numeric_limits<double>::quiet_NaN();
  double pump_tau = std::numeric_limits<double>::quiet_NaN();
  double stokes_omega0 = std::numeric_limits<double>::quiet_NaN();
  double stokes_tau = std::numeric_limits<double>::quiet_NaN();
  double Delta = 0.0;
  double delta = 0.0;
  double alpha = 0.0;  // pump chirp rate
  double beta = 0.0;   // Stokes chirp rate (single-component Stokes)
  // Chirp rates of the two Stokes components; NaN inherits alpha.
  double beta1 = std::numeric_limits<double>::quiet_NaN();
  double beta2 = std::numeric_limits<double>::quiet_NaN();
  double t_d = 0.0;  // Stokes chirp delay (single-component Stokes)
  double t_d1 = 0.0;
  double t_d2 = 0.0;
  double A = std::numeric_limits<double>::quiet_NaN();  // default pi/4 for split-Stokes schemes
  double phi = 0.0;
  double t_start = std::numeric_limits<double>::quiet_NaN();
  double t_end = std::numeric_limits<double>::quiet_NaN();
  std::optional<CVec> initial_state;
};

inline ScenarioSpec build_scenario(const ScenarioOptions& o) {
  constexpr double kPi = 3.14159265358979323846;
  ScenarioSpec s;
  s.scheme = o.scheme;
  const bool split = scheme_has_second_stokes(o.scheme);
  s.A = std::isnan(o.A) ? (split ? kPi / 4.0 : kPi / 2.0) : o.A;
  s.phi = o.phi;
  s.detunings.Delta = o.Delta;
  s.detunings.delta = o.delta;
  s.detunings.level4_splitting = scheme_dimension(o.scheme) == 4 ? o.delta : 0.0;

  const double pump_omega0 = std::isnan(o.pump_omega0) ? o.omega0 : o.pump_omega0;
  const double pump_tau = std::isnan(o.pump_tau) ? o.tau : o.pump_tau;
  const double stokes_omega0 = std::isnan(o.stokes_omega0) ? o.omega0 : o.stokes_omega0;
  const double stokes_tau = std::isnan(o.stokes_tau) ? o.tau : o.stokes_tau;
  const double beta1 = std::isnan(o.beta1) ? o.alpha : o.beta1;
  const double beta2 = std::isnan(o.beta2) ? o.alpha : o.beta2;

  switch (o.scheme) {
    case Scheme::STIRAP3:
    case Scheme::CSTIRAP3:
    case Scheme::CSTIRAP4:
    case Scheme::FSTIRAP3_SINGLE_STOKES:
      s.pump = {pump_omega0, o.t_p, pump_tau, o.alpha, 0.0, 1.0, PulseRole::Pump};
      s.stokes1 = {stokes_omega0, o.t_s, stokes_tau, o.beta, o.t_d, 1.0, PulseRole::Stokes1};
      break;
    case Scheme::FSTIRAP3:
      s.pump = {o.omega0, o.t_p, o.tau, 0.0, 0.0, std::sin(s.A), PulseRole::Pump};
      s.stokes1 = {o.omega0, -o.t_p, o.tau, 0.0, 0.0, 1.0, PulseRole::Stokes1};
      s.stokes2 = PulseSpec{o.omega0, o.t_p, o.tau, 0.0, 0.0, std::cos(s.A), PulseRole::Stokes2};
      break;
    case Scheme::CFSTIRAP3:
    case Scheme::CFSTIRAP4:
      s.pump = {o.omega0, o.t_p, o.tau, o.alpha, 0.0, std::sin(s.A), PulseRole::Pump};
      s.stokes1 = {o.omega0, -o.t_p, o.tau, beta1, o.t_d1, 1.0, PulseRole::Stokes1};
      s.stokes2 = PulseSpec{o.omega0, o.t_p, o.tau, beta2, o.t_d2, std::cos(s.A), PulseRole::Stokes2};
      break;
  }

  const bool auto_start = std::isnan(o.t_start);
  const bool auto_end = std::isnan(o.t_end);
  const auto [lo, hi] = default_window(s);
  s.t_start = auto_start ? lo : o.t_start;
  s.t_end = auto_end ? hi : o.t_end;
  s.auto_window = auto_start && auto_end;

  s.initial_state = o.initial_state ? *o.initial_state : ground_state(s.dimension());
  s.validate();
  return s;
}

// Recompute the window after sweep overrides moved the pulses.
inline void refresh_window(ScenarioSpec& s) {
  if (!s.auto_window) return;
  const auto [lo, hi] = default_window(s);
  s.t_start = lo;
  s.t_end = hi;
}

}  // namespace stirap
