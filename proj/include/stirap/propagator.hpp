#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "stirap/errors.hpp"
#include "stirap/hamiltonian.hpp"
#include "stirap/integrator.hpp"
#include "stirap/linalg.hpp"
#include "stirap/scenario.hpp"

namespace stirap {

struct PropagateOptions {
  double tol = 1e-9;      // relative tolerance, accepted range [1e-12, 1e-6]
  double atol = 1e-12;
  int samples = 0;        // 0: derived from the window
  double norm_tol = 1e-6; // admissible drift of the state norm
};

struct Trajectory {
  int dim = 0;
  std::vector<double> times;
  std::vector<CVec> amplitudes;
  std::vector<std::array<double, 4>> populations;
  std::vector<double> norms;

  std::size_t samples() const { return times.size(); }
  Cplx coherence(std::size_t k, int i, int j) const {
    return amplitudes[k][i] * std::conj(amplitudes[k][j]);
  }
};

inline std::vector<double> uniform_times(double t0, double t1, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double dt = (t1 - t0) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = t0 + i * dt;
  out.back() = t1;
  return out;
}

// Integrates i d/dt psi = H(t) psi for an arbitrary Hamiltonian functor.
template <class HFun>
Trajectory propagate_hamiltonian(HFun&& hamiltonian, int dim, const CVec& initial, double t_start,
                                 double t_end, const PropagateOptions& opt = {}) {
  if (opt.tol < 1e-12 || opt.tol > 1e-6)
    throw ConfigError("tol", "must be in [1e-12, 1e-6]");
  if (opt.samples != 0 && opt.samples < 2)
    throw ConfigError("samples", "need at least 2 output samples");

  const int n = opt.samples > 0 ? opt.samples : default_sample_count(t_start, t_end);

  Trajectory tr;
  tr.dim = dim;
  tr.times = uniform_times(t_start, t_end, n);
  tr.amplitudes.resize(tr.times.size());
  tr.populations.resize(tr.times.size());
  tr.norms.resize(tr.times.size());

  auto rhs = [&](double t, const CVec& y) -> CVec { return -kImag * (hamiltonian(t) * y); };
  auto emit = [&](std::size_t idx, double /*t*/, const CVec& y) {
    tr.amplitudes[idx] = y;
    auto& pop = tr.populations[idx];
    pop.fill(0.0);
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
      pop[static_cast<std::size_t>(i)] = std::norm(y[i]);
      norm2 += pop[static_cast<std::size_t>(i)];
    }
    const double norm = std::sqrt(norm2);
    tr.norms[idx] = norm;
    if (std::abs(norm - 1.0) > opt.norm_tol)
      throw NumericError("state norm drifted to " + std::to_string(norm) + " at t = " +
                         std::to_string(tr.times[idx]) + "; integration unreliable");
  };

  integrate_to_times(rhs, initial, t_start, tr.times, opt.tol, opt.atol, emit);
  return tr;
}

inline Trajectory propagate(const ScenarioSpec& s, const PropagateOptions& opt = {}) {
  s.validate();
  return propagate_hamiltonian([&](double t) { return hamiltonian_at(s, t); }, s.dimension(),
                               s.initial_state, s.t_start, s.t_end, opt);
}

// Named scalar observables of the final sample: populations rho_ii and
// coherence magnitudes |rho_ij|.
struct FinalObservables {
  std::map<std::string, double, std::less<>> values;

  double at(std::string_view name) const {
    auto it = values.find(name);
    if (it == values.end())
      throw ConfigError("observable", "unknown observable '" + std::string(name) + "'");
    return it->second;
  }
};

inline FinalObservables final_observables(const Trajectory& tr) {
  FinalObservables out;
  const std::size_t k = tr.samples() - 1;
  for (int i = 0; i < tr.dim; ++i) {
    const std::string si = std::to_string(i + 1);
    out.values["rho" + si + si] = tr.populations[k][static_cast<std::size_t>(i)];
    for (int j = i + 1; j < tr.dim; ++j)
      out.values["abs_rho" + si + std::to_string(j + 1)] = std::abs(tr.coherence(k, i, j));
  }
  out.values["norm"] = tr.norms[k];
  return out;
}

inline bool observable_valid(std::string_view name, int dim) {
  for (int i = 1; i <= dim; ++i) {
    if (name == "rho" + std::to_string(i) + std::to_string(i)) return true;
    for (int j = i + 1; j <= dim; ++j)
      if (name == "abs_rho" + std::to_string(i) + std::to_string(j)) return true;
  }
  return name == "norm";
}

}  // namespace stirap
