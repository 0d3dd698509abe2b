#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <stirap/dressed.hpp>
#include <stirap/propagator.hpp>
#include <stirap/scenario.hpp>

using namespace stirap;

namespace {

ScenarioSpec chirped4(double delta, double alpha, double t_d) {
  ScenarioOptions o;
  o.scheme = Scheme::CSTIRAP4;
  o.delta = delta;
  o.alpha = alpha;
  o.beta = alpha;
  o.t_d = t_d;
  return build_scenario(o);
}

// Linear two-level crossing with constant coupling; every diagnostic has a
// closed form against which the tracker and the peak fit are checked.
struct TwoLevel {
  double a = 2e-3;
  double c = 0.015;

  CMat H(double t) const {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = a * t;
    m(1, 1) = -a * t;
    m(0, 1) = c;
    m(1, 0) = c;
    return m;
  }
  CMat Hdot(double) const {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = -a;
    return m;
  }
  DressedFrame frame(int samples = 1201) const {
    const auto ts = uniform_times(-300.0, 300.0, samples);
    return dressed_frame_core(
        2, [&](double t) { return H(t); }, [&](double t) { return Hdot(t); }, ts);
  }
  double hop_probability() const {
    CVec y0 = CVec::Zero(2);
    y0[0] = 1.0;
    PropagateOptions opt;
    opt.samples = 601;
    const Trajectory tr =
        propagate_hamiltonian([&](double t) { return H(t); }, 2, y0, -300.0, 300.0, opt);
    return tr.populations.back()[0];
  }
  double standard_estimate() const {
    constexpr double kPi = 3.14159265358979323846;
    return std::exp(-kPi * c * c / a);
  }
};

const CrossingReport* find_pair(const std::vector<CrossingReport>& crs, int a, int b) {
  for (const auto& cr : crs)
    if (cr.state_a == a && cr.state_b == b) return &cr;
  return nullptr;
}

}  // namespace

TEST_CASE("mixing-angle rotation is orthogonal and diagonalizes the resonant ladder") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-3.2, 3.2);
  for (int k = 0; k < 20; ++k) {
    const Eigen::Matrix3d T = adiabatic_rotation(U(rng), U(rng));
    CHECK((T * T.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= 1e-14);
  }

  ScenarioOptions o;
  o.Delta = 0.3;
  const ScenarioSpec s = build_scenario(o);
  for (double t : {-150.0, -70.0, -10.0, 0.0, 25.0, 70.0, 150.0}) {
    const MixingAngles m = mixing_angles(s, t);
    const Eigen::Matrix3d T = adiabatic_rotation(m.theta, m.phi_mix);
    const Eigen::Matrix3d H = hamiltonian_at(s, t).real();
    const Eigen::Matrix3d D = T * H * T.transpose();
    const auto an = analytic_dressed_energies(s, t);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(std::abs(D(i, j)) <= 1e-12);
    CHECK(std::abs(D(0, 0) - an[2]) <= 1e-12);
    CHECK(std::abs(D(1, 1)) <= 1e-12);
    CHECK(std::abs(D(2, 2) - an[0]) <= 1e-12);
  }
}

TEST_CASE("dark state is annihilated on the chirp-compensated line") {
  ScenarioOptions o;
  o.scheme = Scheme::CSTIRAP3;
  o.delta = 0.14;
  o.alpha = 1e-3;
  o.beta = 1e-3;
  const ScenarioSpec s = build_scenario(o);
  for (double t : {-140.0, -70.0, 0.0, 70.0, 140.0}) {
    const CVec d = dark_state(mixing_angles(s, t).theta);
    CHECK(std::abs(d[1]) == 0.0);
    CHECK((hamiltonian_at(s, t) * d).norm() <= 1e-12);
  }
}

TEST_CASE("theta rate matches the differentiated branching angle") {
  const ScenarioSpec s = build_scenario(ScenarioOptions{});
  const double h = 1e-4;
  for (double t : {-120.0, -35.0, 0.0, 35.0, 120.0}) {
    auto theta = [&](double tt) {
      return std::atan2(envelope(s.pump, tt), envelope(s.stokes1, tt));
    };
    const double fd = (theta(t + h) - theta(t - h)) / (2.0 * h);
    CHECK(theta_dot(s.pump, s.stokes1, t) == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK(theta_dot(s.pump, s.stokes1, 1e6) == 0.0);
}

TEST_CASE("mixing angle series holds through dead zones instead of collapsing") {
  const ScenarioSpec s = build_scenario(ScenarioOptions{});
  const std::vector<double> ts = {0.0, 1e4, 2e4};
  const auto series = mixing_angles_series(s, ts);
  REQUIRE(series.size() == 3);
  CHECK(series[1].theta == series[0].theta);
  CHECK(series[2].phi_mix == series[0].phi_mix);
}

TEST_CASE("dressed frame tracks the transfer adiabatically") {
  const ScenarioSpec s = build_scenario(ScenarioOptions{});
  const Trajectory tr = propagate(s);
  const DressedFrame f = dressed_frame(s, tr);
  REQUIRE(f.has_populations);
  CHECK(f.warnings.empty());

  int slot = 0;
  for (int k = 1; k < 3; ++k)
    if (f.populations[0][static_cast<std::size_t>(k)] >
        f.populations[0][static_cast<std::size_t>(slot)])
      slot = k;
  double min_pop = 1.0, max_energy = 0.0, worst_sum = 0.0, worst_unitary = 0.0, worst_an = 0.0;
  for (std::size_t k = 0; k < f.samples(); ++k) {
    min_pop = std::min(min_pop, f.populations[k][static_cast<std::size_t>(slot)]);
    max_energy = std::max(max_energy, std::abs(f.energies[k][static_cast<std::size_t>(slot)]));
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) sum += f.populations[k][static_cast<std::size_t>(i)];
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    const auto an = analytic_dressed_energies(s, f.times[k]);
    std::array<double, 3> tracked{f.energies[k][0], f.energies[k][1], f.energies[k][2]};
    std::sort(tracked.begin(), tracked.end());
    for (int i = 0; i < 3; ++i)
      worst_an = std::max(worst_an, std::abs(tracked[static_cast<std::size_t>(i)] -
                                             an[static_cast<std::size_t>(i)]));
  }
  for (std::size_t k : {std::size_t{0}, f.samples() / 2, f.samples() - 1}) {
    const CMat I = f.states[k].adjoint() * f.states[k];
    worst_unitary =
        std::max(worst_unitary, (I - CMat::Identity(3, 3)).cwiseAbs().maxCoeff());
  }
  CHECK(min_pop >= 0.998);
  CHECK(max_energy <= 1e-9);
  CHECK(worst_sum <= 1e-9);
  CHECK(worst_unitary <= 1e-12);
  CHECK(worst_an <= 1e-10);
}

TEST_CASE("entry and exit labels attach to the bare diagonals") {
  const ScenarioSpec s = chirped4(0.14, -1e-3, 0.0);
  const Trajectory tr = propagate(s);
  const DressedFrame f = dressed_frame(s, tr);

  const CMat H0 = hamiltonian_at(s, s.t_start);
  for (int i = 0; i < 4; ++i)
    CHECK(f.bare_in[static_cast<std::size_t>(i)] ==
          doctest::Approx(H0(i, i).real()).epsilon(1e-9));

  const CMat H1 = hamiltonian_at(s, s.t_end);
  std::array<double, 4> got = f.bare_out;
  std::array<double, 4> want{};
  for (int i = 0; i < 4; ++i) want[static_cast<std::size_t>(i)] = H1(i, i).real();
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 4; ++i)
    CHECK(got[static_cast<std::size_t>(i)] ==
          doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-9));
}

TEST_CASE("constant hamiltonian has constant energies and silent couplings") {
  CMat H = CMat::Zero(3, 3);
  H(0, 1) = 0.3;
  H(1, 0) = 0.3;
  H(1, 2) = 0.4;
  H(2, 1) = 0.4;
  const auto ts = uniform_times(0.0, 10.0, 11);
  const DressedFrame f = dressed_frame_core(
      3, [&](double) { return H; }, [&](double) { return CMat::Zero(3, 3).eval(); }, ts);
  CHECK(f.warnings.empty());
  for (std::size_t k = 0; k < f.samples(); ++k) {
    for (int i = 0; i < 3; ++i)
      CHECK(f.energies[k][static_cast<std::size_t>(i)] ==
            doctest::Approx(f.energies[0][static_cast<std::size_t>(i)]).epsilon(1e-13));
    for (int p = 0; p < 3; ++p) CHECK(f.couplings[k][static_cast<std::size_t>(p)] == 0.0);
  }
}

TEST_CASE("two-level crossing diagnostics match the closed forms") {
  for (double c : {0.015, 0.021}) {
    TwoLevel lz;
    lz.c = c;
    const DressedFrame f = lz.frame();
    const auto crs = find_avoided_crossings(f);
    REQUIRE(crs.size() == 1);
    const CrossingReport& cr = crs.front();
    CHECK(cr.state_a == 1);
    CHECK(cr.state_b == 2);
    CHECK(std::abs(cr.t_a) <= 0.01);
    CHECK(cr.gap == doctest::Approx(2.0 * lz.c).epsilon(1e-3));
    CHECK(cr.gap_slope == doctest::Approx(2.0 * lz.a).epsilon(1e-3));
    CHECK(cr.coupling_peak == doctest::Approx(lz.a / (2.0 * lz.c)).epsilon(1e-2));

    // hop probability from direct propagation against the standard estimate
    const double p_num = lz.hop_probability();
    CHECK(std::abs(p_num - lz.standard_estimate()) / lz.standard_estimate() <= 0.1);

    const double width = cr.gap / cr.gap_slope;
    const CouplingPeakFit fit = fit_coupling_peak(f, cr, 10.0 * width);
    REQUIRE(fit.resolved);
    CHECK(fit.peak == doctest::Approx(lz.a / (2.0 * lz.c)).epsilon(1e-2));
    CHECK(fit.hwhm == doctest::Approx(lz.c / lz.a).epsilon(2e-2));
    CHECK(fit.area == doctest::Approx(std::atan(10.0)).epsilon(1e-2));
  }

  // a gap wider than the detection threshold is not reported
  TwoLevel wide;
  wide.c = 0.03;
  CHECK(find_avoided_crossings(wide.frame()).empty());
}

TEST_CASE("diabatic hop estimate is clamped and monotone in the coupling") {
  CrossingReport cr;
  cr.gap_slope = 1e-3;
  cr.coupling_peak = 0.0;
  CHECK(landau_zener(cr) == 1.0);
  double prev = 1.0;
  for (double v : {0.01, 0.05, 0.2, 1.0}) {
    cr.coupling_peak = v;
    const double p = landau_zener(cr);
    CHECK(p <= prev);
    CHECK(p >= 0.0);
    prev = p;
  }
  cr.gap_slope = 0.0;
  cr.coupling_peak = 0.0;
  CHECK(landau_zener(cr) == 0.0);
}

TEST_CASE("chirped four-level ladder reports its three avoided crossings") {
  const ScenarioSpec s = chirped4(0.14, -1e-3, 0.0);
  const Trajectory tr = propagate(s);
  const DressedFrame f = dressed_frame(s, tr);
  const auto crs = find_avoided_crossings(f);
  REQUIRE(crs.size() == 3);

  const CrossingReport* early = find_pair(crs, 1, 3);
  REQUIRE(early != nullptr);
  CHECK(early->t_a == doctest::Approx(-178.9928).epsilon(2e-3));
  CHECK(early->gap == doctest::Approx(1.289023e-3).epsilon(1e-2));
  CHECK(early->gap_slope == doctest::Approx(4.775407e-3).epsilon(2e-2));

  const CrossingReport* wide = find_pair(crs, 2, 4);
  REQUIRE(wide != nullptr);
  CHECK(wide->t_a == doctest::Approx(138.7407).epsilon(2e-3));
  CHECK(wide->gap == doctest::Approx(8.573998e-3).epsilon(1e-2));
  CHECK(wide->gap_slope == doctest::Approx(4.736667e-3).epsilon(2e-2));

  const CrossingReport* late = find_pair(crs, 3, 4);
  REQUIRE(late != nullptr);
  CHECK(late->t_a == doctest::Approx(170.1677).epsilon(2e-3));
  CHECK(late->gap == doctest::Approx(1.895656e-3).epsilon(1e-2));
  CHECK(late->gap_slope == doctest::Approx(3.923581e-3).epsilon(2e-2));

  for (const auto& cr : crs) {
    CHECK(cr.p_lz >= 0.0);
    CHECK(cr.p_lz <= 1.0);
  }

  // the late crossing sits on the pump-dressed branch: its gap is the local
  // stokes coupling projected by the one-photon tilt
  const MixingAngles m = mixing_angles(s, late->t_a);
  const double os = std::abs(stokes_coupling(s, late->t_a));
  CHECK(std::abs(late->gap - os * std::sin(m.phi_mix)) / late->gap <= 0.05);
}

TEST_CASE("dense sampling resolves the late coupling peak as a lorentzian") {
  const ScenarioSpec s = chirped4(0.14, -1e-3, 0.0);
  PropagateOptions opt;
  opt.samples = static_cast<int>(std::lround((s.t_end - s.t_start) / 0.1)) + 1;
  const Trajectory tr = propagate(s, opt);
  const DressedFrame f = dressed_frame(s, tr);
  CHECK(f.warnings.empty());

  const auto crs = find_avoided_crossings(f);
  const CrossingReport* late = find_pair(crs, 3, 4);
  REQUIRE(late != nullptr);

  const double width = late->gap / late->gap_slope;
  const CouplingPeakFit fit = fit_coupling_peak(f, *late, 10.0 * width);
  REQUIRE(fit.resolved);
  CHECK(fit.peak == doctest::Approx(1.0301).epsilon(2e-2));
  CHECK(fit.peak == doctest::Approx(late->gap_slope / (2.0 * late->gap)).epsilon(3e-2));
  CHECK(fit.hwhm == doctest::Approx(0.4873).epsilon(3e-2));
  CHECK(fit.hwhm == doctest::Approx(width).epsilon(3e-2));
  CHECK(fit.area == doctest::Approx(1.467678).epsilon(2e-2));
}
