// Command-line front end: simulate trajectories, dress them, scan parameter
// planes, or regenerate the bundled reference data sets.

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include <stirap/stirap.hpp>

namespace {

struct Overrides {
  double tol = std::numeric_limits<double>::quiet_NaN();
  int samples = -1;
  int workers = -1;
  std::string format;
  std::string out_path;
};

void add_override_flags(CLI::App* cmd, Overrides& ov, bool with_workers) {
  cmd->add_option("--tol", ov.tol, "Relative integration tolerance, in [1e-12, 1e-6]");
  cmd->add_option("--samples", ov.samples, "Number of output samples (0: automatic)");
  cmd->add_option("--format", ov.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", ov.out_path, "Output file path");
  if (with_workers)
    cmd->add_option("--workers", ov.workers, "Worker threads (0: hardware concurrency)");
}

stirap::RunConfig load_with_overrides(const std::string& config_path, const std::string& command,
                                      const Overrides& ov) {
  stirap::RunConfig cfg = stirap::load_config(config_path, command);
  if (!std::isnan(ov.tol)) {
    if (ov.tol < 1e-12 || ov.tol > 1e-6)
      throw stirap::ConfigError("tol", "must lie in [1e-12, 1e-6]");
    cfg.tol = ov.tol;
  }
  if (ov.samples >= 0) {
    if (ov.samples != 0 && ov.samples < 2)
      throw stirap::ConfigError("samples", "must be 0 (automatic) or >= 2");
    cfg.samples = ov.samples;
  }
  if (ov.workers >= 0) cfg.workers = ov.workers;
  if (!ov.format.empty()) cfg.format = ov.format;
  if (!ov.out_path.empty()) cfg.out_path = ov.out_path;
  return cfg;
}

std::string resolve_out(const stirap::RunConfig& cfg, const char* stem) {
  if (!cfg.out_path.empty()) return cfg.out_path;
  return std::string(stem) + (cfg.format == "json" ? ".json" : ".csv");
}

stirap::PropagateOptions propagate_options(const stirap::RunConfig& cfg) {
  stirap::PropagateOptions opt;
  opt.tol = cfg.tol;
  opt.samples = cfg.samples;
  return opt;
}

int run_simulate(const std::string& config_path, const Overrides& ov) {
  const stirap::RunConfig cfg = load_with_overrides(config_path, "simulate", ov);
  const stirap::ScenarioSpec s = cfg.scenario();
  const stirap::Trajectory tr = stirap::propagate(s, propagate_options(cfg));
  const std::string out = resolve_out(cfg, "trajectory");
  stirap::write_file(out, [&](std::ostream& os) {
    cfg.format == "json" ? stirap::write_trajectory_json(os, tr)
                         : stirap::write_trajectory_csv(os, tr);
  });
  std::cout << "wrote " << out << " (" << tr.samples() << " samples)\n";
  return 0;
}

int run_dressed(const std::string& config_path, const Overrides& ov) {
  const stirap::RunConfig cfg = load_with_overrides(config_path, "dressed", ov);
  const stirap::ScenarioSpec s = cfg.scenario();
  const stirap::Trajectory tr = stirap::propagate(s, propagate_options(cfg));
  const stirap::DressedFrame frame = stirap::dressed_frame(s, tr);
  const std::string out = resolve_out(cfg, "dressed");
  stirap::write_file(out, [&](std::ostream& os) {
    cfg.format == "json" ? stirap::write_dressed_json(os, frame)
                         : stirap::write_dressed_csv(os, frame);
  });
  for (const std::string& w : frame.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "wrote " << out << " (" << frame.times.size() << " samples)\n";
  return 0;
}

int run_sweep(const std::string& config_path, const Overrides& ov) {
  const stirap::RunConfig cfg = load_with_overrides(config_path, "sweep", ov);
  stirap::SweepOptions opt;
  opt.workers = cfg.workers;
  opt.propagate = propagate_options(cfg);
  const stirap::SweepResult res =
      stirap::sweep2d(cfg.scenario(), cfg.x, cfg.y, cfg.observable, opt);
  const std::string out = resolve_out(cfg, "sweep");
  stirap::write_file(out, [&](std::ostream& os) {
    cfg.format == "json" ? stirap::write_sweep_json(os, res) : stirap::write_sweep_csv(os, res);
  });
  if (!res.failures.empty()) {
    std::cerr << res.failures.size() << " of " << res.grid.size()
              << " cells failed and were recorded as nan; first: cell " << res.failures[0].first
              << ": " << res.failures[0].second << '\n';
  }
  std::cout << "wrote " << out << " (" << res.nx() << "x" << res.ny() << " grid)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stimulated Raman adiabatic passage simulator"};
  app.set_version_flag("--version", stirap::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  CLI::App* simulate = app.add_subcommand("simulate", "Propagate a scenario and write the trajectory");
  simulate->add_option("--config", config_path, "JSON run configuration")->required();
  add_override_flags(simulate, ov, false);

  CLI::App* dressed = app.add_subcommand("dressed", "Write adiabatic energies, couplings, and populations");
  dressed->add_option("--config", config_path, "JSON run configuration")->required();
  add_override_flags(dressed, ov, false);

  CLI::App* sweep = app.add_subcommand("sweep", "Scan a final-state observable over a parameter grid");
  sweep->add_option("--config", config_path, "JSON run configuration")->required();
  add_override_flags(sweep, ov, true);

  std::string preset_id;
  std::string preset_out = ".";
  std::string preset_format = "csv";
  int preset_workers = 0;
  CLI::App* preset = app.add_subcommand("preset", "Regenerate a bundled reference data set");
  preset->add_option("--id", preset_id, "Preset identifier (see list-presets)")->required();
  preset->add_option("--out", preset_out, "Output directory");
  preset->add_option("--format", preset_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  preset->add_option("--workers", preset_workers, "Worker threads (0: hardware concurrency)");

  CLI::App* list = app.add_subcommand("list-presets", "List available presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(config_path, ov);
    if (dressed->parsed()) return run_dressed(config_path, ov);
    if (sweep->parsed()) return run_sweep(config_path, ov);
    if (preset->parsed()) {
      const auto files = stirap::run_preset(preset_id, preset_out, preset_workers, preset_format);
      for (const std::string& f : files) std::cout << "wrote " << f << '\n';
      return 0;
    }
    if (list->parsed()) {
      for (const stirap::PresetInfo& p : stirap::preset_registry())
        std::cout << p.id << '\t' << p.title << '\n';
      return 0;
    }
  } catch (const stirap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const stirap::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
