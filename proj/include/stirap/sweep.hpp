#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "stirap/errors.hpp"
#include "stirap/propagator.hpp"
#include "stirap/scenario.hpp"

namespace stirap {

// One sweep axis: a named scenario override and the values it takes.
// Supported names:
//   delta      two-photon detuning (and the level-4 splitting in 4-level schemes)
//   alpha      common chirp rate of every chirped pulse
//   tau_delta  delta expressed as the dimensionless product with the pump width
//   delay      pump-center offset against the Stokes center
//   pump_area  pump pulse area, varied through the pump width
//   none       placeholder for one-dimensional scans
struct AxisSpec {
  std::string name = "none";
  std::vector<double> values{0.0};
};

inline AxisSpec linspace_axis(std::string name, double lo, double hi, int n) {
  AxisSpec ax;
  ax.name = std::move(name);
  ax.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    ax.values[static_cast<std::size_t>(i)] =
        n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return ax;
}

inline void apply_axis(ScenarioSpec& s, const std::string& name, double v) {
  if (name == "none") return;
  if (name == "delta") {
    s.detunings.delta = v;
    if (s.dimension() == 4) s.detunings.level4_splitting = v;
    return;
  }
  if (name == "tau_delta") {
    apply_axis(s, "delta", v / s.pump.tau);
    return;
  }
  if (name == "alpha") {
    s.pump.chirp = v;
    s.stokes1.chirp = v;
    if (s.stokes2) s.stokes2->chirp = v;
    return;
  }
  if (name == "delay") {
    s.pump.t_center = s.stokes1.t_center + v;
    return;
  }
  if (name == "pump_area") {
    if (s.pump.omega0 <= 0.0) throw ConfigError("pump_area", "pump amplitude must be > 0");
    s.pump.tau = v / s.pump.omega0;
    return;
  }
  throw ConfigError("axis", "unknown axis '" + name + "'");
}

// Straight ridge in the (delta, alpha) plane along which a scheme is engineered
// to hit its target; alpha = slope * delta + intercept.
enum class LineKind { DarkState, DetunedState, ResonantState, Coherence };

struct ConstraintLine {
  std::string label;
  double slope = 0.0;
  double intercept = 0.0;
};

inline ConstraintLine constraint_line(const ScenarioSpec& s, LineKind kind) {
  const double sep = s.pump.t_center - s.stokes1.t_center;
  if (sep == 0.0) throw ConfigError("scenario", "pulses are not delayed; no constraint line");
  switch (kind) {
    case LineKind::DarkState:
      return {"dark-state line", 1.0 / sep, 0.0};
    case LineKind::DetunedState:
      return {"detuned-state line", 1.0 / sep, 0.0};
    case LineKind::ResonantState:
      return {"resonant-state line", -1.0 / sep, 0.0};
    case LineKind::Coherence:
      return {"coherence line", 1.0 / (2.0 * s.pump.t_center), 0.0};
  }
  throw ConfigError("line", "unknown constraint line kind");
}

// Attach the ridge lines that exist for the base scheme of a delta/alpha map.
inline std::vector<ConstraintLine> scheme_constraint_lines(const ScenarioSpec& s) {
  switch (s.scheme) {
    case Scheme::CSTIRAP3:
      return {constraint_line(s, LineKind::DarkState)};
    case Scheme::CSTIRAP4:
      return {constraint_line(s, LineKind::DetunedState),
              constraint_line(s, LineKind::ResonantState)};
    case Scheme::CFSTIRAP3:
    case Scheme::CFSTIRAP4:
      return {constraint_line(s, LineKind::Coherence)};
    default:
      return {};
  }
}

struct SweepResult {
  AxisSpec x, y;
  std::string observable;
  std::vector<double> grid;  // row-major, index = iy * nx + ix; failed cells are NaN
  std::vector<ConstraintLine> constraint_lines;
  std::vector<std::pair<std::size_t, std::string>> failures;  // cell index, reason

  std::size_t nx() const { return x.values.size(); }
  std::size_t ny() const { return y.values.size(); }
  double at(std::size_t ix, std::size_t iy) const { return grid[iy * nx() + ix]; }
};

struct SweepOptions {
  int workers = 0;  // 0: hardware concurrency
  PropagateOptions propagate;
};

// Final-state observable over a 2-D parameter grid. Every cell propagates an
// independent scenario, so the result is bitwise identical for any worker
// count; failed cells are reported and filled with NaN rather than aborting
// the whole map.
inline SweepResult sweep2d(const ScenarioSpec& base, const AxisSpec& x, const AxisSpec& y,
                           const std::string& observable, const SweepOptions& opt = {}) {
  base.validate();
  if (!observable_valid(observable, base.dimension()))
    throw ConfigError("observable",
                      "'" + observable + "' is not defined for scheme " + scheme_name(base.scheme));
  if (x.values.empty() || y.values.empty()) throw ConfigError("axis", "axis has no values");

  SweepResult res;
  res.x = x;
  res.y = y;
  res.observable = observable;
  res.constraint_lines = scheme_constraint_lines(base);
  const std::size_t nx = x.values.size();
  const std::size_t ny = y.values.size();
  res.grid.assign(nx * ny, std::numeric_limits<double>::quiet_NaN());

  int workers = opt.workers > 0 ? opt.workers
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), nx * ny));

  std::atomic<std::size_t> next{0};
  std::mutex failures_mutex;
  auto run_cells = [&]() {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= nx * ny) return;
      const std::size_t ix = cell % nx;
      const std::size_t iy = cell / nx;
      ScenarioSpec s = base;
      apply_axis(s, x.name, x.values[ix]);
      apply_axis(s, y.name, y.values[iy]);
      refresh_window(s);
      try {
        const Trajectory tr = propagate(s, opt.propagate);
        res.grid[cell] = final_observables(tr).at(observable);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        res.failures.emplace_back(cell, e.what());
      }
    }
  };

  if (workers == 1) {
    run_cells();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(run_cells);
    for (auto& th : pool) th.join();
  }

  std::sort(res.failures.begin(), res.failures.end());
  return res;
}

}  // namespace stirap
