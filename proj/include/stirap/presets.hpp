#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "stirap/config.hpp"
#include "stirap/dressed.hpp"
#include "stirap/io.hpp"
#include "stirap/propagator.hpp"
#include "stirap/scenario.hpp"
#include "stirap/sweep.hpp"
#include "stirap/version.hpp"

namespace stirap {

// Canned scenario bundles that regenerate the reference data sets: each preset
// writes its data files plus a manifest recording the exact parameters, the
// tool version, wall time, and which values are best-effort reconstructions
// rather than published numbers.
struct PresetInfo {
  std::string id;
  std::string title;
};

namespace detail {

struct PresetContext {
  std::filesystem::path out_dir;
  int workers = 0;
  std::string format = "csv";

  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, std::string>> parameters;   // stem -> object
  std::vector<std::pair<std::string, std::string>> observables;  // stem -> object
  std::vector<std::pair<std::string, std::string>> crossings;    // stem -> array
  std::vector<std::pair<std::string, std::string>> fits;         // stem -> array
  std::vector<std::string> reconstructed;

  std::string ext() const { return format == "json" ? ".json" : ".csv"; }
};

inline std::string indent_block(const std::string& text, const std::string& pad) {
  std::string out;
  out.reserve(text.size());
  std::string body = text;
  while (!body.empty() && (body.back() == '\n' || body.back() == ' ')) body.pop_back();
  for (char c : body) {
    out += c;
    if (c == '\n') out += pad;
  }
  return out;
}

inline std::string render_observables(const FinalObservables& fo) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [name, value] : fo.values) {
    if (!first) os << ", ";
    first = false;
    os << '"' << name << "\": " << json_number(value);
  }
  os << '}';
  return os.str();
}

inline std::string render_crossings(const std::vector<CrossingReport>& list) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < list.size(); ++i) {
    const CrossingReport& c = list[i];
    if (i) os << ',';
    os << "\n      {\"states\": [" << c.state_a << ", " << c.state_b
       << "], \"t_a\": " << json_number(c.t_a) << ", \"gap\": " << json_number(c.gap)
       << ", \"gap_slope\": " << json_number(c.gap_slope)
       << ", \"coupling_peak\": " << json_number(c.coupling_peak)
       << ", \"t_peak\": " << json_number(c.t_peak) << ", \"p_lz\": " << json_number(c.p_lz)
       << '}';
  }
  os << (list.empty() ? "]" : "\n    ]");
  return os.str();
}

inline std::string render_fits(const std::vector<CouplingPeakFit>& list) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < list.size(); ++i) {
    const CouplingPeakFit& f = list[i];
    if (i) os << ',';
    os << "\n      {\"center\": " << json_number(f.center) << ", \"peak\": " << json_number(f.peak)
       << ", \"hwhm\": " << json_number(f.hwhm) << ", \"fwhm\": " << json_number(f.fwhm)
       << ", \"area\": " << json_number(f.area)
       << ", \"resolved\": " << (f.resolved ? "true" : "false") << '}';
  }
  os << (list.empty() ? "]" : "\n    ]");
  return os.str();
}

inline void record_parameters(PresetContext& ctx, const std::string& stem, const RunConfig& cfg) {
  ctx.parameters.emplace_back(stem, indent_block(print_config(cfg), "    "));
}

inline RunConfig as_config(const ScenarioOptions& o, const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.options = o;
  return cfg;
}

inline void emit_trajectory(PresetContext& ctx, const std::string& stem,
                            const ScenarioOptions& o) {
  record_parameters(ctx, stem, as_config(o, "simulate"));
  const ScenarioSpec s = build_scenario(o);
  const Trajectory tr = propagate(s);
  const std::string file = stem + ctx.ext();
  write_file(ctx.out_dir / file, [&](std::ostream& os) {
    ctx.format == "json" ? write_trajectory_json(os, tr) : write_trajectory_csv(os, tr);
  });
  ctx.outputs.push_back(file);
  ctx.observables.emplace_back(stem, render_observables(final_observables(tr)));
}

inline void emit_dressed(PresetContext& ctx, const std::string& stem, const ScenarioOptions& o,
                         bool report_crossings, double sample_dt = 0.0) {
  record_parameters(ctx, stem, as_config(o, "dressed"));
  const ScenarioSpec s = build_scenario(o);
  PropagateOptions popt;
  if (sample_dt > 0.0)
    popt.samples = static_cast<int>(std::lround((s.t_end - s.t_start) / sample_dt)) + 1;
  const Trajectory tr = propagate(s, popt);
  const DressedFrame frame = dressed_frame(s, tr);
  const std::string file = stem + ctx.ext();
  write_file(ctx.out_dir / file, [&](std::ostream& os) {
    ctx.format == "json" ? write_dressed_json(os, frame) : write_dressed_csv(os, frame);
  });
  ctx.outputs.push_back(file);
  ctx.observables.emplace_back(stem, render_observables(final_observables(tr)));

  if (!report_crossings) return;
  const std::vector<CrossingReport> found = find_avoided_crossings(frame);
  std::vector<CouplingPeakFit> peak_fits;
  const double dt = frame.times.size() > 1 ? frame.times[1] - frame.times[0] : 1.0;
  for (const CrossingReport& c : found) {
    const double spread = c.gap_slope > 0 ? 10.0 * c.gap / c.gap_slope : 0.0;
    peak_fits.push_back(fit_coupling_peak(frame, c, std::max(spread, 5.0 * dt)));
  }
  ctx.crossings.emplace_back(stem, render_crossings(found));
  ctx.fits.emplace_back(stem, render_fits(peak_fits));
}

inline void emit_sweep(PresetContext& ctx, const std::string& stem, const ScenarioOptions& o,
                       const AxisSpec& x, const AxisSpec& y, const std::string& observable,
                       const std::vector<ConstraintLine>* lines_override = nullptr) {
  RunConfig cfg = as_config(o, "sweep");
  cfg.x = x;
  cfg.y = y;
  cfg.observable = observable;
  cfg.workers = ctx.workers;
  record_parameters(ctx, stem, cfg);

  SweepOptions opt;
  opt.workers = ctx.workers;
  SweepResult res = sweep2d(build_scenario(o), x, y, observable, opt);
  if (lines_override) res.constraint_lines = *lines_override;
  const std::string file = stem + ctx.ext();
  write_file(ctx.out_dir / file, [&](std::ostream& os) {
    ctx.format == "json" ? write_sweep_json(os, res) : write_sweep_csv(os, res);
  });
  ctx.outputs.push_back(file);
}

inline void write_manifest(PresetContext& ctx, const std::string& id, const std::string& title,
                           double wall_ms) {
  const std::string file = id + "_manifest.json";
  write_file(ctx.out_dir / file, [&](std::ostream& os) {
    os << "{\n";
    os << "  \"preset\": \"" << json_escape(id) << "\",\n";
    os << "  \"title\": \"" << json_escape(title) << "\",\n";
    os << "  \"version\": \"" << kVersion << "\",\n";
    os << "  \"format\": \"" << ctx.format << "\",\n";
    os << "  \"workers\": " << ctx.workers << ",\n";
    os << "  \"wall_ms\": " << json_number(wall_ms) << ",\n";
    os << "  \"reconstructed\": [";
    for (std::size_t i = 0; i < ctx.reconstructed.size(); ++i)
      os << (i ? ", " : "") << '"' << json_escape(ctx.reconstructed[i]) << '"';
    os << "],\n";
    os << "  \"outputs\": [";
    for (std::size_t i = 0; i < ctx.outputs.size(); ++i)
      os << (i ? ", " : "") << '"' << json_escape(ctx.outputs[i]) << '"';
    os << "],\n";
    auto section = [&](const char* name,
                       const std::vector<std::pair<std::string, std::string>>& entries,
                       bool trailing_comma) {
      os << "  \"" << name << "\": {";
      for (std::size_t i = 0; i < entries.size(); ++i)
        os << (i ? "," : "") << "\n    \"" << json_escape(entries[i].first)
           << "\": " << entries[i].second;
      os << (entries.empty() ? "}" : "\n  }") << (trailing_comma ? ",\n" : "\n");
    };
    const bool has_crossings = !ctx.crossings.empty();
    section("parameters", ctx.parameters, true);
    section("observables", ctx.observables, has_crossings);
    if (has_crossings) {
      section("crossings", ctx.crossings, true);
      section("coupling_fits", ctx.fits, false);
    }
    os << "}\n";
  });
  ctx.outputs.push_back(file);
}

// Shared parameter blocks.

inline ScenarioOptions chirped3(double delta, double rate) {
  ScenarioOptions o;
  o.scheme = Scheme::CSTIRAP3;
  o.delta = delta;
  o.alpha = rate;
  o.beta = rate;
  return o;
}

inline ScenarioOptions chirped4(double delta, double rate, double t_d) {
  ScenarioOptions o;
  o.scheme = Scheme::CSTIRAP4;
  o.delta = delta;
  o.alpha = rate;
  o.beta = rate;
  o.t_d = t_d;
  return o;
}

inline ScenarioOptions split4(double delta, double rate, double t_d1, double t_d2) {
  ScenarioOptions o;
  o.scheme = Scheme::CFSTIRAP4;
  o.delta = delta;
  o.alpha = rate;
  o.t_d1 = t_d1;
  o.t_d2 = t_d2;
  return o;
}

inline ScenarioOptions single_stokes_fractional() {
  ScenarioOptions o;
  o.scheme = Scheme::FSTIRAP3_SINGLE_STOKES;
  o.pump_omega0 = 0.3;
  o.pump_tau = 22.0;
  o.t_p = 171.6;
  o.stokes_omega0 = 1.0;
  o.stokes_tau = 30.0;
  o.t_s = 150.0;
  return o;
}

inline AxisSpec detuning_axis() { return linspace_axis("delta", -0.2, 0.2, 81); }
inline AxisSpec chirp_axis() { return linspace_axis("alpha", -2e-3, 2e-3, 81); }

inline void note_grid_reconstruction(PresetContext& ctx) {
  ctx.reconstructed.push_back("axis ranges");
  ctx.reconstructed.push_back("grid resolution 81x81");
}

}  // namespace detail

inline const std::vector<PresetInfo>& preset_registry() {
  static const std::vector<PresetInfo> registry{
      {"fig2", "resonant three-level transfer vs scaled two-photon detuning"},
      {"fig3ab", "chirp-compensated transfer, positive detuning and chirp"},
      {"fig3cd", "chirp-compensated transfer, negative detuning and chirp"},
      {"fig4", "final-state population over the detuning-chirp plane"},
      {"fig6b", "four-level selectivity: detuned target route"},
      {"fig6c", "four-level selectivity: resonant target route"},
      {"fig7a", "detuned-state population over the detuning-chirp plane"},
      {"fig7b", "resonant-state population over the detuning-chirp plane"},
      {"fig8-9", "dressed energies and couplings, prompt and delayed chirp"},
      {"fig10", "resonant-state population with delayed Stokes chirp"},
      {"fig11", "fractional transfer into an equal superposition"},
      {"fig12", "superposition coherence vs scaled two-photon detuning"},
      {"fig13", "fractional transfer with a single delayed Gaussian Stokes"},
      {"fig14", "coherence over the delay-area plane, single-Stokes variant"},
      {"fig15", "dressed energies of chirped fractional transfer"},
      {"fig16", "coherence over the detuning-chirp plane, split Stokes"},
      {"fig17b", "delay-selected coherence with the detuned final state"},
      {"fig17c", "delay-selected coherence with the resonant final state"},
      {"fig18a", "detuned-state coherence over the detuning-chirp plane"},
      {"fig18b", "resonant-state coherence over the detuning-chirp plane"},
      {"fig19", "dressed energies for the delay-selected variants"},
  };
  return registry;
}

inline std::vector<std::string> run_preset(const std::string& id,
                                           const std::filesystem::path& out_dir, int workers = 0,
                                           const std::string& format = "csv") {
  const PresetInfo* info = nullptr;
  for (const PresetInfo& p : preset_registry())
    if (p.id == id) info = &p;
  if (!info) throw ConfigError("preset", "unknown preset '" + id + "'");
  if (format != "csv" && format != "json")
    throw ConfigError("format", "must be 'csv' or 'json'");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError(out_dir.string(), "cannot create output directory: " + ec.message());

  detail::PresetContext ctx;
  ctx.out_dir = out_dir;
  ctx.workers = workers;
  ctx.format = format;

  const auto start = std::chrono::steady_clock::now();
  using detail::chirp_axis;
  using detail::detuning_axis;

  if (id == "fig2") {
    ScenarioOptions o;
    o.scheme = Scheme::STIRAP3;
    o.omega0 = 0.1;
    const AxisSpec x = linspace_axis("tau_delta", -6.0, 6.0, 121);
    const AxisSpec none;
    for (const char* obs : {"rho11", "rho22", "rho33"})
      detail::emit_sweep(ctx, std::string("fig2_") + obs, o, x, none, obs);
    ctx.reconstructed.push_back("axis range and resolution");
    ctx.reconstructed.push_back("drive amplitude 0.1 (detuning falloff saturates at stronger drive)");
  } else if (id == "fig3ab") {
    detail::emit_trajectory(ctx, "fig3ab_trajectory", detail::chirped3(0.14, 1e-3));
    detail::emit_dressed(ctx, "fig3ab_dressed", detail::chirped3(0.14, 1e-3), false);
  } else if (id == "fig3cd") {
    detail::emit_trajectory(ctx, "fig3cd_trajectory", detail::chirped3(-0.14, -1e-3));
    detail::emit_dressed(ctx, "fig3cd_dressed", detail::chirped3(-0.14, -1e-3), false);
  } else if (id == "fig4") {
    ScenarioOptions o;
    o.scheme = Scheme::CSTIRAP3;
    o.omega0 = 0.3;
    detail::emit_sweep(ctx, "fig4_sweep", o, detuning_axis(), chirp_axis(), "rho33");
    detail::note_grid_reconstruction(ctx);
    ctx.reconstructed.push_back("drive amplitude 0.3 (ridge contrast saturates at stronger drive)");
  } else if (id == "fig6b") {
    detail::emit_trajectory(ctx, "fig6b_trajectory", detail::chirped4(0.14, 1e-3, 0.0));
  } else if (id == "fig6c") {
    detail::emit_trajectory(ctx, "fig6c_trajectory", detail::chirped4(0.14, -1e-3, 0.0));
  } else if (id == "fig7a" || id == "fig7b") {
    ScenarioOptions o;
    o.scheme = Scheme::CSTIRAP4;
    const bool detuned = id == "fig7a";
    const std::vector<ConstraintLine> lines{constraint_line(
        build_scenario(o), detuned ? LineKind::DetunedState : LineKind::ResonantState)};
    detail::emit_sweep(ctx, id + "_sweep", o, detuning_axis(), chirp_axis(),
                       detuned ? "rho44" : "rho33", &lines);
    detail::note_grid_reconstruction(ctx);
  } else if (id == "fig8-9") {
    // Coupling peaks near crossings are sub-unit wide; sample densely enough to fit them.
    detail::emit_dressed(ctx, "fig8-9_pos_dressed", detail::chirped4(0.14, 1e-3, 0.0), true, 0.1);
    detail::emit_dressed(ctx, "fig8-9_neg_dressed", detail::chirped4(0.14, -1e-3, 0.0), true, 0.1);
    detail::emit_dressed(ctx, "fig8-9_delayed_pos_dressed", detail::chirped4(0.14, 1e-3, 140.0),
                         true, 0.1);
    detail::emit_dressed(ctx, "fig8-9_delayed_neg_dressed", detail::chirped4(0.14, -1e-3, 140.0),
                         true, 0.1);
  } else if (id == "fig10") {
    ScenarioOptions o;
    o.scheme = Scheme::CSTIRAP4;
    o.t_d = 140.0;
    const std::vector<ConstraintLine> no_lines;
    detail::emit_sweep(ctx, "fig10_sweep", o, detuning_axis(), chirp_axis(), "rho33", &no_lines);
    detail::note_grid_reconstruction(ctx);
  } else if (id == "fig11") {
    ScenarioOptions o;
    o.scheme = Scheme::FSTIRAP3;
    detail::emit_trajectory(ctx, "fig11_trajectory", o);
  } else if (id == "fig12") {
    ScenarioOptions o;
    o.scheme = Scheme::FSTIRAP3;
    detail::emit_sweep(ctx, "fig12_sweep", o, linspace_axis("tau_delta", -6.0, 6.0, 121),
                       AxisSpec{}, "abs_rho13");
    ctx.reconstructed.push_back("axis range and resolution");
  } else if (id == "fig13") {
    detail::emit_trajectory(ctx, "fig13_trajectory", detail::single_stokes_fractional());
  } else if (id == "fig14") {
    detail::emit_sweep(ctx, "fig14_sweep", detail::single_stokes_fractional(),
                       linspace_axis("delay", 0.0, 40.0, 81),
                       linspace_axis("pump_area", 0.0, 12.0, 81), "abs_rho13");
    detail::note_grid_reconstruction(ctx);
  } else if (id == "fig15") {
    ScenarioOptions pos;
    pos.scheme = Scheme::CFSTIRAP3;
    pos.delta = 0.14;
    pos.alpha = 1e-3;
    pos.t_d1 = 0.0;
    pos.t_d2 = -140.0;
    ScenarioOptions neg = pos;
    neg.delta = -0.14;
    neg.alpha = -1e-3;
    detail::emit_dressed(ctx, "fig15_pos_dressed", pos, false);
    detail::emit_dressed(ctx, "fig15_neg_dressed", neg, false);
  } else if (id == "fig16") {
    ScenarioOptions o;
    o.scheme = Scheme::CFSTIRAP3;
    o.t_d1 = 0.0;
    o.t_d2 = -140.0;
    detail::emit_sweep(ctx, "fig16_sweep", o, detuning_axis(), chirp_axis(), "abs_rho13");
    detail::note_grid_reconstruction(ctx);
  } else if (id == "fig17b") {
    detail::emit_trajectory(ctx, "fig17b_trajectory", detail::split4(0.14, 1e-3, 0.0, -140.0));
  } else if (id == "fig17c") {
    detail::emit_trajectory(ctx, "fig17c_trajectory", detail::split4(0.14, 1e-3, 140.0, 0.0));
  } else if (id == "fig18a") {
    detail::emit_sweep(ctx, "fig18a_sweep", detail::split4(0.0, 0.0, 0.0, -140.0), detuning_axis(),
                       chirp_axis(), "abs_rho14");
    detail::note_grid_reconstruction(ctx);
  } else if (id == "fig18b") {
    const std::vector<ConstraintLine> no_lines;
    detail::emit_sweep(ctx, "fig18b_sweep", detail::split4(0.0, 0.0, 140.0, 0.0), detuning_axis(),
                       chirp_axis(), "abs_rho13", &no_lines);
    detail::note_grid_reconstruction(ctx);
  } else if (id == "fig19") {
    detail::emit_dressed(ctx, "fig19_rho14_dressed", detail::split4(0.14, 1e-3, 0.0, -140.0),
                         true);
    detail::emit_dressed(ctx, "fig19_rho13_dressed", detail::split4(0.14, 1e-3, 140.0, 0.0),
                         true);
  }

  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  detail::write_manifest(ctx, id, info->title, wall_ms);
  return ctx.outputs;
}

}  // namespace stirap
