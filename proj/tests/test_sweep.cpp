#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include <stirap/propagator.hpp>
#include <stirap/scenario.hpp>
#include <stirap/sweep.hpp>

using namespace stirap;

namespace {

ScenarioSpec base3() {
  ScenarioOptions o;
  o.scheme = Scheme::CSTIRAP3;
  return build_scenario(o);
}

ScenarioSpec base4() {
  ScenarioOptions o;
  o.scheme = Scheme::CSTIRAP4;
  return build_scenario(o);
}

}  // namespace

TEST_CASE("axis overrides rewrite the intended scenario knobs") {
  ScenarioSpec s = base4();

  apply_axis(s, "delta", 0.08);
  CHECK(s.detunings.delta == 0.08);
  CHECK(s.detunings.level4_splitting == 0.08);

  apply_axis(s, "tau_delta", 2.8);
  CHECK(s.detunings.delta == doctest::Approx(0.028).epsilon(1e-15));
  CHECK(s.detunings.level4_splitting == doctest::Approx(0.028).epsilon(1e-15));

  apply_axis(s, "alpha", 5e-4);
  CHECK(s.pump.chirp == 5e-4);
  CHECK(s.stokes1.chirp == 5e-4);

  apply_axis(s, "delay", 30.0);
  CHECK(s.pump.t_center == doctest::Approx(-40.0).epsilon(1e-15));

  apply_axis(s, "pump_area", 6.0);
  CHECK(s.pump.tau == doctest::Approx(6.0).epsilon(1e-15));

  const double before = s.detunings.delta;
  apply_axis(s, "none", 123.0);
  CHECK(s.detunings.delta == before);

  CHECK_THROWS_AS(apply_axis(s, "pump_width", 1.0), ConfigError);

  // the three-level variant must not touch the splitting
  ScenarioSpec s3 = base3();
  apply_axis(s3, "delta", 0.08);
  CHECK(s3.detunings.delta == 0.08);
  CHECK(s3.detunings.level4_splitting == 0.0);

  // the split-stokes variant chirps both components
  ScenarioOptions oc;
  oc.scheme = Scheme::CFSTIRAP4;
  ScenarioSpec sc = build_scenario(oc);
  apply_axis(sc, "alpha", 7e-4);
  CHECK(sc.stokes2->chirp == 7e-4);

  ScenarioSpec zero = base3();
  zero.pump.omega0 = 0.0;
  CHECK_THROWS_AS(apply_axis(zero, "pump_area", 5.0), ConfigError);
}

TEST_CASE("linspace axis hits both endpoints") {
  const AxisSpec ax = linspace_axis("delta", -0.2, 0.2, 81);
  REQUIRE(ax.values.size() == 81);
  CHECK(ax.values.front() == -0.2);
  CHECK(ax.values.back() == 0.2);
  CHECK(ax.values[40] == doctest::Approx(0.0).epsilon(1e-15));
  const AxisSpec single = linspace_axis("alpha", 0.5, 1.5, 1);
  REQUIRE(single.values.size() == 1);
  CHECK(single.values[0] == 0.5);
}

TEST_CASE("ridge lines carry the slopes implied by the pulse geometry") {
  const ScenarioSpec s3 = base3();
  const ConstraintLine dark = constraint_line(s3, LineKind::DarkState);
  CHECK(dark.label == "dark-state line");
  CHECK(dark.slope == doctest::Approx(1.0 / 140.0).epsilon(1e-15));
  CHECK(dark.intercept == 0.0);

  const ScenarioSpec s4 = base4();
  CHECK(constraint_line(s4, LineKind::DetunedState).slope ==
        doctest::Approx(1.0 / 140.0).epsilon(1e-15));
  CHECK(constraint_line(s4, LineKind::ResonantState).slope ==
        doctest::Approx(-1.0 / 140.0).epsilon(1e-15));

  ScenarioOptions oc;
  oc.scheme = Scheme::CFSTIRAP4;
  const ScenarioSpec sc = build_scenario(oc);
  const ConstraintLine coh = constraint_line(sc, LineKind::Coherence);
  CHECK(coh.label == "coherence line");
  CHECK(coh.slope == doctest::Approx(1.0 / 140.0).epsilon(1e-15));

  ScenarioOptions trivial;
  trivial.t_p = 0.0;
  trivial.t_s = 0.0;
  CHECK_THROWS_AS((void)constraint_line(build_scenario(trivial), LineKind::DarkState),
                  ConfigError);
}

TEST_CASE("each scheme advertises its own ridge lines") {
  CHECK(scheme_constraint_lines(build_scenario(ScenarioOptions{})).empty());
  CHECK(scheme_constraint_lines(base3()).size() == 1);
  CHECK(scheme_constraint_lines(base4()).size() == 2);
  ScenarioOptions oc3;
  oc3.scheme = Scheme::CFSTIRAP3;
  CHECK(scheme_constraint_lines(build_scenario(oc3)).size() == 1);
  ScenarioOptions oc4;
  oc4.scheme = Scheme::CFSTIRAP4;
  CHECK(scheme_constraint_lines(build_scenario(oc4)).size() == 1);
}

TEST_CASE("sweep grids are bitwise identical for any worker count") {
  const ScenarioSpec s = base3();
  const AxisSpec x = linspace_axis("delta", -0.1, 0.1, 4);
  const AxisSpec y = linspace_axis("alpha", -1e-3, 1e-3, 3);
  SweepOptions one;
  one.workers = 1;
  SweepOptions four;
  four.workers = 4;
  const SweepResult a = sweep2d(s, x, y, "rho33", one);
  const SweepResult b = sweep2d(s, x, y, "rho33", four);
  REQUIRE(a.grid.size() == 12);
  REQUIRE(b.grid.size() == 12);
  CHECK(a.failures.empty());
  CHECK(b.failures.empty());
  for (std::size_t k = 0; k < a.grid.size(); ++k) CHECK(a.grid[k] == b.grid[k]);
  CHECK(a.constraint_lines.size() == 1);
}

TEST_CASE("failed cells are reported and filled with nan") {
  const ScenarioSpec s = build_scenario(ScenarioOptions{});
  AxisSpec x;
  x.name = "pump_area";
  x.values = {0.0, 6.0, 12.0};
  const AxisSpec y;  // none
  SweepOptions opt;
  opt.workers = 1;
  const SweepResult res = sweep2d(s, x, y, "rho33", opt);
  REQUIRE(res.grid.size() == 3);
  REQUIRE(res.failures.size() == 1);
  CHECK(res.failures[0].first == 0);
  CHECK(std::isnan(res.at(0, 0)));
  CHECK(std::isfinite(res.at(1, 0)));
  CHECK(std::isfinite(res.at(2, 0)));
  CHECK(res.ny() == 1);
}

TEST_CASE("sweeps reject unusable observables and empty axes upfront") {
  const ScenarioSpec s = build_scenario(ScenarioOptions{});
  const AxisSpec x = linspace_axis("delta", -0.1, 0.1, 3);
  const AxisSpec y;
  CHECK_THROWS_WITH_AS((void)sweep2d(s, x, y, "rho44"),
                       "observable: 'rho44' is not defined for scheme STIRAP3", ConfigError);
  AxisSpec empty;
  empty.name = "delta";
  empty.values.clear();
  CHECK_THROWS_AS((void)sweep2d(s, empty, y, "rho33"), ConfigError);
}

TEST_CASE("transfer stays pinned along the compensation ridge") {
  for (double delta : {-0.15, -0.05, 0.05, 0.15}) {
    ScenarioOptions o;
    o.scheme = Scheme::CSTIRAP3;
    o.omega0 = 0.3;
    ScenarioSpec s = build_scenario(o);
    apply_axis(s, "delta", delta);
    apply_axis(s, "alpha", delta / 140.0);
    refresh_window(s);
    const Trajectory tr = propagate(s);
    CHECK(final_observables(tr).at("rho33") >= 0.99);
  }
}
