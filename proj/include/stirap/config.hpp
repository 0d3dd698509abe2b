#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stirap/errors.hpp"
#include "stirap/io.hpp"
#include "stirap/scenario.hpp"
#include "stirap/sweep.hpp"

namespace stirap {

// A fully validated run request: the scenario knobs exactly as configured
// (defaults left as NaN sentinels so auto-derived values stay auto), plus the
// numeric and output options shared by every command.
struct RunConfig {
  std::string command = "simulate";  // simulate | dressed | sweep
  ScenarioOptions options;
  double tol = 1e-9;
  int samples = 0;  // 0: automatic sample count
  int workers = 0;  // 0: hardware concurrency (sweep only)
  std::string format = "csv";
  std::string out_path;  // empty: per-command default
  AxisSpec x, y;         // sweep only
  std::string observable;

  ScenarioSpec scenario() const { return build_scenario(options); }
};

namespace detail {

inline bool same_knob(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

inline bool same_options(const ScenarioOptions& a, const ScenarioOptions& b) {
  if (a.scheme != b.scheme) return false;
  const double* pa[] = {&a.omega0, &a.tau,    &a.t_p,     &a.t_s,    &a.pump_omega0,
                        &a.pump_tau, &a.stokes_omega0, &a.stokes_tau, &a.Delta, &a.delta,
                        &a.alpha,  &a.beta,   &a.beta1,   &a.beta2,  &a.t_d,
                        &a.t_d1,   &a.t_d2,   &a.A,       &a.phi,    &a.t_start,
                        &a.t_end};
  const double* pb[] = {&b.omega0, &b.tau,    &b.t_p,     &b.t_s,    &b.pump_omega0,
                        &b.pump_tau, &b.stokes_omega0, &b.stokes_tau, &b.Delta, &b.delta,
                        &b.alpha,  &b.beta,   &b.beta1,   &b.beta2,  &b.t_d,
                        &b.t_d1,   &b.t_d2,   &b.A,       &b.phi,    &b.t_start,
                        &b.t_end};
  for (std::size_t i = 0; i < sizeof(pa) / sizeof(pa[0]); ++i)
    if (!same_knob(*pa[i], *pb[i])) return false;
  if (a.initial_state.has_value() != b.initial_state.has_value()) return false;
  if (a.initial_state) {
    if (a.initial_state->size() != b.initial_state->size()) return false;
    for (Eigen::Index i = 0; i < a.initial_state->size(); ++i)
      if ((*a.initial_state)[i] != (*b.initial_state)[i]) return false;
  }
  return true;
}

}  // namespace detail

inline bool operator==(const AxisSpec& a, const AxisSpec& b) {
  return a.name == b.name && a.values == b.values;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.command == b.command && detail::same_options(a.options, b.options) && a.tol == b.tol &&
         a.samples == b.samples && a.workers == b.workers && a.format == b.format &&
         a.out_path == b.out_path && a.x == b.x && a.y == b.y && a.observable == b.observable;
}

namespace detail {

using Json = nlohmann::json;

inline double need_number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "value must be finite");
  return d;
}

inline int need_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

inline std::string need_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

// Scenario keys accepted for each scheme. Everything else is a config error:
// silently ignoring a chirp rate on an unchirped scheme would hide typos.
inline std::set<std::string> scenario_keys(Scheme sch) {
  std::set<std::string> keys{"scheme",  "omega0", "tau",   "t_p",   "Delta",
                             "delta",   "t_start", "t_end", "initial_state"};
  switch (sch) {
    case Scheme::STIRAP3:
      keys.insert("t_s");
      break;
    case Scheme::CSTIRAP3:
    case Scheme::CSTIRAP4:
      keys.insert({"t_s", "alpha", "beta", "t_d"});
      break;
    case Scheme::FSTIRAP3:
      keys.insert({"A", "phi"});
      break;
    case Scheme::CFSTIRAP3:
    case Scheme::CFSTIRAP4:
      keys.insert({"alpha", "beta1", "beta2", "t_d1", "t_d2", "A", "phi"});
      break;
    case Scheme::FSTIRAP3_SINGLE_STOKES:
      keys.insert({"t_s", "pump_omega0", "pump_tau", "stokes_omega0", "stokes_tau"});
      break;
  }
  return keys;
}

inline AxisSpec parse_axis(const Json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  static const std::set<std::string> allowed{"name", "min", "max", "n", "values"};
  for (const auto& item : v.items())
    if (!allowed.count(item.key()))
      throw ConfigError(path + "." + item.key(), "unknown axis key");
  if (!v.contains("name")) throw ConfigError(path + ".name", "required");
  AxisSpec ax;
  ax.name = need_string(v.at("name"), path + ".name");
  static const std::set<std::string> names{"delta", "alpha",     "tau_delta",
                                           "delay", "pump_area", "none"};
  if (!names.count(ax.name)) throw ConfigError(path + ".name", "unknown axis '" + ax.name + "'");

  const bool has_values = v.contains("values");
  const bool has_range = v.contains("min") || v.contains("max") || v.contains("n");
  if (has_values && has_range)
    throw ConfigError(path, "give either 'values' or 'min'/'max'/'n', not both");
  if (has_values) {
    const Json& vals = v.at("values");
    if (!vals.is_array() || vals.empty())
      throw ConfigError(path + ".values", "expected a non-empty array of numbers");
    ax.values.clear();
    for (std::size_t i = 0; i < vals.size(); ++i)
      ax.values.push_back(need_number(vals[i], path + ".values[" + std::to_string(i) + "]"));
    return ax;
  }
  if (!v.contains("min") || !v.contains("max") || !v.contains("n"))
    throw ConfigError(path, "range axes need all of 'min', 'max', 'n'");
  const double lo = need_number(v.at("min"), path + ".min");
  const double hi = need_number(v.at("max"), path + ".max");
  const int n = need_int(v.at("n"), path + ".n");
  if (n < 1) throw ConfigError(path + ".n", "must be >= 1");
  return linspace_axis(ax.name, lo, hi, n);
}

inline CVec parse_initial_state(const Json& v, int dim) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw ConfigError("initial_state",
                      "expected " + std::to_string(dim) + " [re, im] pairs");
  CVec state(dim);
  for (int i = 0; i < dim; ++i) {
    const Json& pair = v[static_cast<std::size_t>(i)];
    const std::string path = "initial_state[" + std::to_string(i) + "]";
    if (!pair.is_array() || pair.size() != 2) throw ConfigError(path, "expected [re, im]");
    state[i] = Cplx(need_number(pair[0], path + "[0]"), need_number(pair[1], path + "[1]"));
  }
  return state;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text, const std::string& command) {
  if (command != "simulate" && command != "dressed" && command != "sweep")
    throw ConfigError("command", "unknown command '" + command + "'");

  detail::Json doc;
  try {
    doc = detail::Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "top level must be an object");
  if (!doc.contains("scheme")) throw ConfigError("scheme", "required");

  RunConfig cfg;
  cfg.command = command;
  const std::string scheme_text = detail::need_string(doc.at("scheme"), "scheme");
  const auto scheme = scheme_from_name(scheme_text);
  if (!scheme) throw ConfigError("scheme", "unknown scheme '" + scheme_text + "'");
  cfg.options.scheme = *scheme;

  std::set<std::string> allowed = detail::scenario_keys(cfg.options.scheme);
  allowed.insert({"tol", "samples", "output", "format"});
  const bool is_sweep = command == "sweep";
  if (is_sweep) allowed.insert({"workers", "x", "y", "observable"});
  for (const auto& item : doc.items())
    if (!allowed.count(item.key()))
      throw ConfigError(item.key(), "unknown key for " + command + " with scheme " +
                                        scheme_name(cfg.options.scheme));

  auto knob = [&](const char* key, double& field) {
    if (doc.contains(key)) field = detail::need_number(doc.at(key), key);
  };
  ScenarioOptions& o = cfg.options;
  knob("omega0", o.omega0);
  knob("tau", o.tau);
  knob("t_p", o.t_p);
  knob("t_s", o.t_s);
  knob("pump_omega0", o.pump_omega0);
  knob("pump_tau", o.pump_tau);
  knob("stokes_omega0", o.stokes_omega0);
  knob("stokes_tau", o.stokes_tau);
  knob("Delta", o.Delta);
  knob("delta", o.delta);
  knob("alpha", o.alpha);
  knob("beta", o.beta);
  knob("beta1", o.beta1);
  knob("beta2", o.beta2);
  knob("t_d", o.t_d);
  knob("t_d1", o.t_d1);
  knob("t_d2", o.t_d2);
  knob("A", o.A);
  knob("phi", o.phi);
  knob("t_start", o.t_start);
  knob("t_end", o.t_end);
  if (doc.contains("initial_state"))
    o.initial_state =
        detail::parse_initial_state(doc.at("initial_state"), scheme_dimension(o.scheme));

  if (doc.contains("tol")) cfg.tol = detail::need_number(doc.at("tol"), "tol");
  if (cfg.tol < 1e-12 || cfg.tol > 1e-6)
    throw ConfigError("tol", "must lie in [1e-12, 1e-6]");
  if (doc.contains("samples")) cfg.samples = detail::need_int(doc.at("samples"), "samples");
  if (cfg.samples != 0 && cfg.samples < 2)
    throw ConfigError("samples", "must be 0 (automatic) or >= 2");
  if (doc.contains("workers")) cfg.workers = detail::need_int(doc.at("workers"), "workers");
  if (cfg.workers < 0) throw ConfigError("workers", "must be >= 0");
  if (doc.contains("format")) cfg.format = detail::need_string(doc.at("format"), "format");
  if (cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("format", "must be 'csv' or 'json'");
  if (doc.contains("output")) cfg.out_path = detail::need_string(doc.at("output"), "output");

  if (is_sweep) {
    if (!doc.contains("x")) throw ConfigError("x", "sweep needs an x axis");
    cfg.x = detail::parse_axis(doc.at("x"), "x");
    if (doc.contains("y")) cfg.y = detail::parse_axis(doc.at("y"), "y");
    if (!doc.contains("observable")) throw ConfigError("observable", "sweep needs an observable");
    cfg.observable = detail::need_string(doc.at("observable"), "observable");
    if (!observable_valid(cfg.observable, scheme_dimension(o.scheme)))
      throw ConfigError("observable", "'" + cfg.observable + "' is not defined for scheme " +
                                          scheme_name(o.scheme));
  }

  // Materialize once so scenario range violations surface at parse time.
  cfg.scenario();
  return cfg;
}

// Canonical JSON rendering of a RunConfig; parse_config(print_config(c),
// c.command) == c. Knobs left at their NaN sentinel are omitted so automatic
// defaults stay automatic after a round trip.
inline std::string print_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "{\n";
  bool first = true;
  auto sep = [&]() {
    if (!first) os << ",\n";
    first = false;
  };
  auto put_string = [&](const char* key, const std::string& v) {
    sep();
    os << "  \"" << key << "\": \"" << detail::json_escape(v) << "\"";
  };
  auto put_number = [&](const char* key, double v) {
    if (std::isnan(v)) return;
    sep();
    os << "  \"" << key << "\": " << format_double(v);
  };
  auto put_int = [&](const char* key, int v) {
    sep();
    os << "  \"" << key << "\": " << v;
  };

  const ScenarioOptions& o = cfg.options;
  const std::set<std::string> keys = detail::scenario_keys(o.scheme);
  put_string("scheme", scheme_name(o.scheme));
  auto knob = [&](const char* key, double v) {
    if (keys.count(key)) put_number(key, v);
  };
  knob("omega0", o.omega0);
  knob("tau", o.tau);
  knob("t_p", o.t_p);
  knob("t_s", o.t_s);
  knob("pump_omega0", o.pump_omega0);
  knob("pump_tau", o.pump_tau);
  knob("stokes_omega0", o.stokes_omega0);
  knob("stokes_tau", o.stokes_tau);
  knob("Delta", o.Delta);
  knob("delta", o.delta);
  knob("alpha", o.alpha);
  knob("beta", o.beta);
  knob("beta1", o.beta1);
  knob("beta2", o.beta2);
  knob("t_d", o.t_d);
  knob("t_d1", o.t_d1);
  knob("t_d2", o.t_d2);
  knob("A", o.A);
  knob("phi", o.phi);
  knob("t_start", o.t_start);
  knob("t_end", o.t_end);
  if (o.initial_state) {
    sep();
    os << "  \"initial_state\": [";
    for (Eigen::Index i = 0; i < o.initial_state->size(); ++i) {
      if (i) os << ", ";
      os << '[' << format_double((*o.initial_state)[i].real()) << ", "
         << format_double((*o.initial_state)[i].imag()) << ']';
    }
    os << ']';
  }

  put_number("tol", cfg.tol);
  put_int("samples", cfg.samples);
  if (cfg.command == "sweep") put_int("workers", cfg.workers);
  put_string("format", cfg.format);
  if (!cfg.out_path.empty()) put_string("output", cfg.out_path);

  if (cfg.command == "sweep") {
    auto put_axis = [&](const char* key, const AxisSpec& ax) {
      sep();
      os << "  \"" << key << "\": {\"name\": \"" << detail::json_escape(ax.name)
         << "\", \"values\": ";
      detail::json_array(os, ax.values);
      os << '}';
    };
    put_axis("x", cfg.x);
    put_axis("y", cfg.y);
    put_string("observable", cfg.observable);
  }
  os << "\n}\n";
  return os.str();
}

inline RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), command);
}

}  // namespace stirap
