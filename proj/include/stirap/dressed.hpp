#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stirap/errors.hpp"
#include "stirap/hamiltonian.hpp"
#include "stirap/linalg.hpp"
#include "stirap/propagator.hpp"
#include "stirap/scenario.hpp"

namespace stirap {

// Below this energy separation two adiabatic states count as one degenerate
// cluster: their individual eigenvectors are numerically arbitrary and only
// the spanned subspace is meaningful.
inline constexpr double kDegenerateGap = 1e-12;

struct MixingAngles {
  double theta = 0.0;    // pump/Stokes branching angle
  double phi_mix = 0.0;  // bright-state tilt against the intermediate level
};

inline MixingAngles mixing_angles(const ScenarioSpec& s, double t) {
  const double op = envelope(s.pump, t);
  const double os = std::abs(stokes_coupling(s, t));
  MixingAngles m;
  m.theta = std::atan2(op, os);
  m.phi_mix = 0.5 * std::atan2(std::hypot(op, os), one_photon_detuning(s.detunings, s.pump, t));
  return m;
}

// Grid version; where both fields underflow to zero the angles are held at
// their previous value instead of collapsing to atan2(0, 0).
inline std::vector<MixingAngles> mixing_angles_series(const ScenarioSpec& s,
                                                      std::span<const double> times) {
  std::vector<MixingAngles> out;
  out.reserve(times.size());
  for (double t : times) {
    const double op = envelope(s.pump, t);
    const double os = std::abs(stokes_coupling(s, t));
    if (op == 0.0 && os == 0.0 && !out.empty()) {
      out.push_back(out.back());
      continue;
    }
    out.push_back(mixing_angles(s, t));
  }
  return out;
}

// Transformation from the bare to the adiabatic basis of a three-level scheme
// on two-photon resonance, rows ordered {upper, dark, lower}.
inline Eigen::Matrix3d adiabatic_rotation(double theta, double phi_mix) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi_mix), cp = std::cos(phi_mix);
  Eigen::Matrix3d T;
  T << st * sp, cp, ct * sp,
       ct, 0.0, -st,
       st * cp, -sp, ct * cp;
  return T;
}

// The trap-free superposition of the two end levels; carries no intermediate-
// level component and is an exact zero-energy eigenstate on resonance.
inline CVec dark_state(double theta) {
  CVec v = CVec::Zero(3);
  v[0] = Cplx(std::cos(theta), 0.0);
  v[2] = Cplx(-std::sin(theta), 0.0);
  return v;
}

// Rotation speed of the dark state, the yardstick for adiabaticity.
inline double theta_dot(const PulseSpec& pump, const PulseSpec& stokes, double t) {
  const double op = envelope(pump, t);
  const double os = envelope(stokes, t);
  const double r2 = op * op + os * os;
  if (r2 < 1e-300) return 0.0;
  const double num = os * envelope_dot(pump, t) - op * envelope_dot(stokes, t);
  return num / r2;
}

// Adiabatic (dressed) frame along a trajectory: instantaneous eigenpairs
// labelled by continuity, with non-adiabatic couplings and dressed-state
// occupations of the propagated wavefunction.
struct DressedFrame {
  int dim = 0;
  std::vector<double> times;
  std::vector<std::array<double, 4>> energies;      // tracked adiabatic energies
  std::vector<CMat> states;                         // columns: tracked eigenvectors
  std::vector<std::array<double, 4>> populations;   // |<state_k|psi>|^2
  std::vector<std::array<double, 6>> couplings;     // |<i|dH/dt|j>| / gap, pair-indexed
  std::vector<std::uint8_t> cluster_flags;          // per-sample bitmask of clustered slots
  std::array<double, 4> bare_in{};                  // diagonal energies matched at entry
  std::array<double, 4> bare_out{};                 // and at exit
  std::vector<std::string> warnings;
  bool has_populations = false;

  std::size_t samples() const { return times.size(); }
  static int pair_count(int dim) { return dim * (dim - 1) / 2; }
  static int pair_index(int i, int j, int dim) {
    int off = 0;
    for (int r = 0; r < i; ++r) off += dim - 1 - r;
    return off + (j - i - 1);
  }
};

namespace detail {

// Unitary Procrustes alignment of the columns of w onto the columns of ref.
inline void align_cluster(const CMat& ref, CMat& w) {
  const CMat m = w.adjoint() * ref;  // maximize Re tr(R^H m)
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  w = w * (svd.matrixU() * svd.matrixV().adjoint());
}

}  // namespace detail

template <class HFun, class HDotFun>
DressedFrame dressed_frame_core(int dim, HFun&& hamiltonian, HDotFun&& hamiltonian_dot,
                                std::span<const double> times,
                                const std::vector<CVec>* amplitudes = nullptr) {
  DressedFrame f;
  f.dim = dim;
  f.times.assign(times.begin(), times.end());
  const std::size_t n = times.size();
  f.energies.resize(n);
  f.states.resize(n);
  f.populations.resize(n);
  f.couplings.resize(n);
  f.cluster_flags.assign(n, 0);
  f.has_populations = amplitudes != nullptr;

  CMat ref = CMat::Identity(dim, dim);  // previous tracked basis; bare basis at entry

  for (std::size_t k = 0; k < n; ++k) {
    const double t = times[k];
    const CMat H = hamiltonian(t);
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed");
    const auto& evals = es.eigenvalues();
    const auto& evecs = es.eigenvectors();

    // Assign numerical eigenvectors to tracked slots by maximal overlap with
    // the previous basis, largest overlaps first.
    const CMat overlap = ref.adjoint() * evecs;
    std::array<int, 4> col_of_slot{};
    {
      struct Cand { double o; int slot, col; };
      std::vector<Cand> cands;
      cands.reserve(static_cast<std::size_t>(dim * dim));
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) cands.push_back({std::abs(overlap(a, b)), a, b});
      std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.o != y.o) return x.o > y.o;
        if (x.slot != y.slot) return x.slot < y.slot;
        return x.col < y.col;
      });
      std::array<bool, 4> slot_used{}, col_used{};
      int assigned = 0;
      for (const Cand& c : cands) {
        if (assigned == dim) break;
        if (slot_used[static_cast<std::size_t>(c.slot)] ||
            col_used[static_cast<std::size_t>(c.col)])
          continue;
        slot_used[static_cast<std::size_t>(c.slot)] = true;
        col_used[static_cast<std::size_t>(c.col)] = true;
        col_of_slot[static_cast<std::size_t>(c.slot)] = c.col;
        ++assigned;
      }
    }

    CMat w(dim, dim);
    std::array<double, 4> lam{};
    for (int s = 0; s < dim; ++s) {
      w.col(s) = evecs.col(col_of_slot[static_cast<std::size_t>(s)]);
      lam[static_cast<std::size_t>(s)] = evals[col_of_slot[static_cast<std::size_t>(s)]];
    }

    // Degenerate clusters: chain eigenvalues closer than kDegenerateGap and
    // align each cluster's basis onto the previous one; individual numerical
    // eigenvectors inside such a cluster carry no information.
    {
      std::array<int, 4> order{};
      for (int s = 0; s < dim; ++s) order[static_cast<std::size_t>(s)] = s;
      std::sort(order.begin(), order.begin() + dim, [&](int a, int b) {
        return lam[static_cast<std::size_t>(a)] < lam[static_cast<std::size_t>(b)];
      });
      int start = 0;
      while (start < dim) {
        int end = start + 1;
        while (end < dim && lam[static_cast<std::size_t>(order[static_cast<std::size_t>(end)])] -
                                    lam[static_cast<std::size_t>(
                                        order[static_cast<std::size_t>(end - 1)])] <
                                kDegenerateGap)
          ++end;
        if (end - start > 1) {
          const int m = end - start;
          CMat refc(dim, m), wc(dim, m);
          for (int c = 0; c < m; ++c) {
            const int slot = order[static_cast<std::size_t>(start + c)];
            refc.col(c) = ref.col(slot);
            wc.col(c) = w.col(slot);
          }
          detail::align_cluster(refc, wc);
          for (int c = 0; c < m; ++c) {
            const int slot = order[static_cast<std::size_t>(start + c)];
            w.col(slot) = wc.col(c);
            lam[static_cast<std::size_t>(slot)] = (wc.col(c).adjoint() * H * wc.col(c))(0).real();
            f.cluster_flags[k] |= static_cast<std::uint8_t>(1u << slot);
          }
        }
        start = end;
      }
    }

    // Gauge: make the overlap with the previous basis real positive.
    for (int s = 0; s < dim; ++s) {
      const Cplx o = (ref.col(s).adjoint() * w.col(s))(0);
      const double mag = std::abs(o);
      if (mag > 0.0) w.col(s) *= std::conj(o) / mag;
      if (k > 0 && mag < 0.9 && !(f.cluster_flags[k] & (1u << s)))
        f.warnings.push_back("continuity drop for state " + std::to_string(s + 1) + " at t = " +
                             std::to_string(t) + " (overlap " + std::to_string(mag) + ")");
    }

    if (k == 0) {
      for (int s = 0; s < dim; ++s) {
        int dom = 0;
        for (int i = 1; i < dim; ++i)
          if (std::abs(w.col(s)[i]) > std::abs(w.col(s)[dom])) dom = i;
        f.bare_in[static_cast<std::size_t>(s)] = H(dom, dom).real();
      }
    }
    if (k + 1 == n) {
      for (int s = 0; s < dim; ++s) {
        int dom = 0;
        for (int i = 1; i < dim; ++i)
          if (std::abs(w.col(s)[i]) > std::abs(w.col(s)[dom])) dom = i;
        f.bare_out[static_cast<std::size_t>(s)] = H(dom, dom).real();
      }
    }

    const CMat dH = hamiltonian_dot(t);
    auto& V = f.couplings[k];
    V.fill(0.0);
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        const Cplx num = (w.col(i).adjoint() * dH * w.col(j))(0);
        const double gap = std::abs(lam[static_cast<std::size_t>(i)] -
                                    lam[static_cast<std::size_t>(j)]);
        V[static_cast<std::size_t>(DressedFrame::pair_index(i, j, dim))] =
            std::abs(num) / std::max(gap, 1e-300);
      }

    auto& pop = f.populations[k];
    pop.fill(0.0);
    if (amplitudes) {
      const CVec& psi = (*amplitudes)[k];
      for (int s = 0; s < dim; ++s) pop[static_cast<std::size_t>(s)] = std::norm((w.col(s).adjoint() * psi)(0));
    }

    f.energies[k] = lam;
    f.states[k] = w;
    ref = w;
  }
  return f;
}

inline DressedFrame dressed_frame(const ScenarioSpec& s, const Trajectory& tr) {
  s.validate();
  if (tr.dim != s.dimension()) throw ConfigError("trajectory", "dimension mismatch");
  return dressed_frame_core(
      s.dimension(), [&](double t) { return hamiltonian_at(s, t); },
      [&](double t) { return hamiltonian_dot_at(s, t); }, tr.times, &tr.amplitudes);
}

// One avoided crossing between two tracked adiabatic states. States are
// 1-based in reports; the refined quantities come from a local quadratic fit
// of the squared gap, which is exact for a hyperbolic two-level crossing.
struct CrossingReport {
  int state_a = 0;
  int state_b = 0;
  double t_a = 0.0;           // closest approach
  double gap = 0.0;           // minimal energy separation
  double gap_slope = 0.0;     // asymptotic |d(E_a - E_b)/dt| of the crossing branches
  double coupling_peak = 0.0; // max non-adiabatic coupling near the crossing
  double t_peak = 0.0;
  double p_lz = 0.0;          // diabatic transition estimate, see landau_zener()
};

// Diabatic passage estimate from the peak coupling and the gap slope,
// clamped to [0, 1]. Vanishing slope means the crossing is traversed
// infinitely slowly: fully adiabatic, probability 0.
inline double landau_zener(const CrossingReport& cr) {
  if (cr.gap_slope == 0.0) return 0.0;
  constexpr double kPi = 3.14159265358979323846;
  const double p =
      std::exp(-4.0 * kPi * kPi * cr.coupling_peak * cr.coupling_peak / std::abs(cr.gap_slope));
  return std::clamp(p, 0.0, 1.0);
}

inline std::vector<CrossingReport> find_avoided_crossings(const DressedFrame& f,
                                                          double gap_threshold = 0.05) {
  std::vector<CrossingReport> out;
  const int dim = f.dim;
  const std::size_t n = f.samples();
  if (n < 3) return out;

  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      const int pi = DressedFrame::pair_index(i, j, dim);
      auto gap_at = [&](std::size_t k) {
        return std::abs(f.energies[k][static_cast<std::size_t>(i)] -
                        f.energies[k][static_cast<std::size_t>(j)]);
      };
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const double g0 = gap_at(k);
        if (g0 >= gap_threshold) continue;
        // Below the degeneracy threshold the pair is an exact crossing (or a
        // numerically degenerate cluster), not an avoided one.
        if (g0 < kDegenerateGap) continue;
        const double gl = gap_at(k - 1);
        const double gr = gap_at(k + 1);
        if (!(gl > g0 && g0 <= gr)) continue;  // strict on the left picks one index per minimum

        CrossingReport cr;
        cr.state_a = i + 1;
        cr.state_b = j + 1;
        cr.t_a = f.times[k];
        cr.gap = g0;

        const double dt = 0.5 * (f.times[k + 1] - f.times[k - 1]);
        const double yl = gl * gl, y0 = g0 * g0, yr = gr * gr;
        const double A = (yl + yr - 2.0 * y0) / (2.0 * dt * dt);
        const double B = (yr - yl) / (2.0 * dt);
        if (A > 0.0) {
          const double u = std::clamp(-B / (2.0 * A), -dt, dt);
          cr.t_a = f.times[k] + u;
          cr.gap = std::sqrt(std::max(0.0, y0 + B * u + A * u * u));
          cr.gap_slope = std::sqrt(A);
        }

        // Peak coupling in a window of a few crossing widths.
        const double width = cr.gap_slope > 0.0 ? cr.gap / cr.gap_slope : dt;
        const double half_window = std::max(10.0 * width, 5.0 * dt);
        std::size_t kmax = k;
        double vmax = -1.0;
        for (std::size_t m = 0; m < n; ++m) {
          if (std::abs(f.times[m] - cr.t_a) > half_window) continue;
          const double v = f.couplings[m][static_cast<std::size_t>(pi)];
          if (v > vmax) {
            vmax = v;
            kmax = m;
          }
        }
        cr.coupling_peak = vmax;
        cr.t_peak = f.times[kmax];
        if (kmax > 0 && kmax + 1 < n) {
          const double vl = f.couplings[kmax - 1][static_cast<std::size_t>(pi)];
          const double vr = f.couplings[kmax + 1][static_cast<std::size_t>(pi)];
          const double d2 = vl + vr - 2.0 * vmax;
          if (d2 < 0.0) {
            const double du = 0.5 * (vl - vr) / d2 * (f.times[kmax + 1] - f.times[kmax]);
            cr.t_peak = f.times[kmax] + du;
            cr.coupling_peak = vmax - 0.25 * (vl - vr) * du / (f.times[kmax + 1] - f.times[kmax]);
          }
        }

        cr.p_lz = landau_zener(cr);
        out.push_back(cr);
      }
    }
  }
  return out;
}

// Peak-shape diagnostics of a non-adiabatic coupling resonance. For an ideal
// two-level crossing the curve is a Lorentzian of half-width gap/slope with
// unit-independent area pi/2.
struct CouplingPeakFit {
  double center = 0.0;
  double peak = 0.0;
  double hwhm = 0.0;
  double fwhm = 0.0;
  double area = 0.0;
  bool resolved = false;
};

inline CouplingPeakFit fit_coupling_peak(const DressedFrame& f, const CrossingReport& cr,
                                         double window_halfwidth) {
  CouplingPeakFit fit;
  const int pi = DressedFrame::pair_index(cr.state_a - 1, cr.state_b - 1, f.dim);
  const std::size_t n = f.samples();

  std::size_t lo = n, hi = 0, kmax = 0;
  double vmax = -1.0;
  for (std::size_t m = 0; m < n; ++m) {
    if (std::abs(f.times[m] - cr.t_peak) > window_halfwidth) continue;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    const double v = f.couplings[m][static_cast<std::size_t>(pi)];
    if (v > vmax) {
      vmax = v;
      kmax = m;
    }
  }
  if (lo >= hi || vmax <= 0.0) return fit;

  fit.center = f.times[kmax];
  fit.peak = vmax;
  if (kmax > lo && kmax < hi) {
    const double vl = f.couplings[kmax - 1][static_cast<std::size_t>(pi)];
    const double vr = f.couplings[kmax + 1][static_cast<std::size_t>(pi)];
    const double d2 = vl + vr - 2.0 * vmax;
    if (d2 < 0.0) {
      const double h = f.times[kmax + 1] - f.times[kmax];
      const double du = 0.5 * (vl - vr) / d2 * h;
      fit.center = f.times[kmax] + du;
      fit.peak = vmax - 0.25 * (vl - vr) * du / h;
    }
  }

  const double half = 0.5 * fit.peak;
  auto value = [&](std::size_t m) { return f.couplings[m][static_cast<std::size_t>(pi)]; };
  double t_left = f.times[lo], t_right = f.times[hi];
  bool found_left = false, found_right = false;
  for (std::size_t m = kmax; m > lo; --m) {
    if (value(m - 1) <= half) {
      const double v1 = value(m - 1), v2 = value(m);
      const double frac = (half - v1) / (v2 - v1);
      t_left = f.times[m - 1] + frac * (f.times[m] - f.times[m - 1]);
      found_left = true;
      break;
    }
  }
  for (std::size_t m = kmax; m < hi; ++m) {
    if (value(m + 1) <= half) {
      const double v1 = value(m), v2 = value(m + 1);
      const double frac = (v1 - half) / (v1 - v2);
      t_right = f.times[m] + frac * (f.times[m + 1] - f.times[m]);
      found_right = true;
      break;
    }
  }
  fit.resolved = found_left && found_right;
  fit.fwhm = t_right - t_left;
  fit.hwhm = 0.5 * fit.fwhm;

  double area = 0.0;
  for (std::size_t m = lo; m < hi; ++m)
    area += 0.5 * (value(m) + value(m + 1)) * (f.times[m + 1] - f.times[m]);
  fit.area = area;
  return fit;
}

}  // namespace stirap
