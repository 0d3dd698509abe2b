#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

#include "stirap/errors.hpp"
#include "stirap/linalg.hpp"

namespace stirap {

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

// Embedded Dormand-Prince 5(4) pair with FSAL. The integrator lands exactly on
// every requested output time, so no interpolation enters the results and the
// sample values are bitwise reproducible for a given input.
template <class RHS, class Emit>
void integrate_to_times(RHS&& rhs, CVec y, double t0, std::span<const double> times, double rtol,
                        double atol, Emit&& emit, IntegratorStats* stats = nullptr) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // Difference between the 5th- and 4th-order weights, used for the error estimate.
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                          e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                          e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  const auto n = y.size();
  IntegratorStats local;
  IntegratorStats& st = stats ? *stats : local;

  double t = t0;
  CVec k1 = rhs(t, y);
  ++st.rhs_evals;
  double h = 0.0;  // proposed step, seeded per target below

  CVec y2(n), y5(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), err(n);

  for (std::size_t idx = 0; idx < times.size(); ++idx) {
    const double target = times[idx];
    if (target < t) throw NumericError("output times must be non-decreasing");
    if (target == t) {
      emit(idx, t, y);
      continue;
    }
    if (h <= 0.0) h = std::min(0.1, target - t);

    while (t < target) {
      const bool clipped = h >= target - t;
      const double hs = clipped ? target - t : h;
      if (hs < 1e-14 * std::max(1.0, std::abs(t)))
        throw NumericError("step size underflow (stiff segment near t = " + std::to_string(t) +
                           ")");

      y2 = y + hs * (a21 * k1);
      k2 = rhs(t + c2 * hs, y2);
      y2 = y + hs * (a31 * k1 + a32 * k2);
      k3 = rhs(t + c3 * hs, y2);
      y2 = y + hs * (a41 * k1 + a42 * k2 + a43 * k3);
      k4 = rhs(t + c4 * hs, y2);
      y2 = y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      k5 = rhs(t + c5 * hs, y2);
      y2 = y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      k6 = rhs(t + hs, y2);
      y5 = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = rhs(t + hs, y5);
      st.rhs_evals += 6;

      err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double sum = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        const double q = std::abs(err[i]) / sc;
        sum += q * q;
      }
      const double err_norm = std::sqrt(sum / static_cast<double>(n));

      if (err_norm <= 1.0) {
        t = clipped ? target : t + hs;
        y.swap(y5);
        k1.swap(k7);
        ++st.steps;
        const double grow = err_norm == 0.0 ? 5.0 : 0.9 * std::pow(err_norm, -0.2);
        const double hn = hs * std::clamp(grow, 0.2, 5.0);
        // A step clipped to the output grid must not drag the natural step down.
        h = clipped ? std::max(h, hn) : hn;
      } else {
        ++st.rejected;
        h = hs * std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
        if (st.rejected > 20'000'000) throw NumericError("integrator failed to converge");
      }
      if (st.steps > 50'000'000) throw NumericError("step limit exceeded");
    }
    emit(idx, t, y);
  }
}

}  // namespace stirap
