#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "stirap/dressed.hpp"
#include "stirap/errors.hpp"
#include "stirap/propagator.hpp"
#include "stirap/sweep.hpp"

namespace stirap {

// All writers emit LF-terminated lines through binary-mode streams and format
// every floating-point value with %.17g, so identical data produces identical
// bytes on every platform and run.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

// JSON rejects nan/inf literals; data gaps become null.
inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

inline void json_array(std::ostream& os, const std::vector<double>& values) {
  os << '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << json_number(values[i]);
  }
  os << ']';
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<std::string> trajectory_columns(int dim) {
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= dim; ++i) {
    cols.push_back("re_a" + std::to_string(i));
    cols.push_back("im_a" + std::to_string(i));
  }
  for (int i = 1; i <= dim; ++i)
    cols.push_back("rho" + std::to_string(i) + std::to_string(i));
  for (int j = 2; j <= dim; ++j) cols.push_back("abs_rho1" + std::to_string(j));
  cols.push_back("norm");
  return cols;
}

inline void trajectory_row(const Trajectory& tr, std::size_t k, std::vector<double>& row) {
  row.clear();
  row.push_back(tr.times[k]);
  const CVec& a = tr.amplitudes[k];
  for (int i = 0; i < tr.dim; ++i) {
    row.push_back(a[i].real());
    row.push_back(a[i].imag());
  }
  for (int i = 0; i < tr.dim; ++i)
    row.push_back(tr.populations[k][static_cast<std::size_t>(i)]);
  for (int j = 1; j < tr.dim; ++j) row.push_back(std::abs(tr.coherence(k, 0, j)));
  row.push_back(tr.norms[k]);
}

inline std::vector<std::string> dressed_columns(const DressedFrame& f) {
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= f.dim; ++i) cols.push_back("lambda" + std::to_string(i));
  if (f.has_populations)
    for (int i = 1; i <= f.dim; ++i) cols.push_back("pop_d" + std::to_string(i));
  for (int i = 1; i <= f.dim; ++i)
    for (int j = i + 1; j <= f.dim; ++j)
      cols.push_back("V_" + std::to_string(i) + std::to_string(j));
  return cols;
}

inline void dressed_row(const DressedFrame& f, std::size_t k, std::vector<double>& row) {
  row.clear();
  row.push_back(f.times[k]);
  for (int i = 0; i < f.dim; ++i)
    row.push_back(f.energies[k][static_cast<std::size_t>(i)]);
  if (f.has_populations)
    for (int i = 0; i < f.dim; ++i)
      row.push_back(f.populations[k][static_cast<std::size_t>(i)]);
  for (std::size_t p = 0; p < DressedFrame::pair_count(f.dim); ++p)
    row.push_back(f.couplings[k][p]);
}

namespace detail {

inline void write_csv_table(std::ostream& os, const std::vector<std::string>& cols,
                            std::size_t rows,
                            const std::function<void(std::size_t, std::vector<double>&)>& fill) {
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    os << cols[i];
  }
  os << '\n';
  std::vector<double> row;
  row.reserve(cols.size());
  for (std::size_t k = 0; k < rows; ++k) {
    fill(k, row);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_double(row[i]);
    }
    os << '\n';
  }
}

inline void write_json_columns(std::ostream& os, const std::vector<std::string>& cols,
                               std::size_t rows,
                               const std::function<void(std::size_t, std::vector<double>&)>& fill) {
  std::vector<std::vector<double>> data(cols.size());
  for (auto& c : data) c.reserve(rows);
  std::vector<double> row;
  for (std::size_t k = 0; k < rows; ++k) {
    fill(k, row);
    for (std::size_t i = 0; i < cols.size(); ++i) data[i].push_back(row[i]);
  }
  os << "{\n";
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << "  \"" << json_escape(cols[i]) << "\": ";
    json_array(os, data[i]);
    os << (i + 1 < cols.size() ? ",\n" : "\n");
  }
  os << "}\n";
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  detail::write_csv_table(os, trajectory_columns(tr.dim), tr.samples(),
                          [&](std::size_t k, std::vector<double>& row) {
                            trajectory_row(tr, k, row);
                          });
}

inline void write_trajectory_json(std::ostream& os, const Trajectory& tr) {
  detail::write_json_columns(os, trajectory_columns(tr.dim), tr.samples(),
                             [&](std::size_t k, std::vector<double>& row) {
                               trajectory_row(tr, k, row);
                             });
}

inline void write_dressed_csv(std::ostream& os, const DressedFrame& f) {
  detail::write_csv_table(os, dressed_columns(f), f.times.size(),
                          [&](std::size_t k, std::vector<double>& row) {
                            dressed_row(f, k, row);
                          });
}

inline void write_dressed_json(std::ostream& os, const DressedFrame& f) {
  detail::write_json_columns(os, dressed_columns(f), f.times.size(),
                             [&](std::size_t k, std::vector<double>& row) {
                               dressed_row(f, k, row);
                             });
}

// Sweep rows scan the grid with the y axis outermost, matching the row-major
// grid layout.
inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
  os << "x,y,value\n";
  for (std::size_t iy = 0; iy < res.ny(); ++iy)
    for (std::size_t ix = 0; ix < res.nx(); ++ix)
      os << format_double(res.x.values[ix]) << ',' << format_double(res.y.values[iy]) << ','
         << format_double(res.at(ix, iy)) << '\n';
}

inline void write_sweep_json(std::ostream& os, const SweepResult& res) {
  os << "{\n";
  os << "  \"x_name\": \"" << detail::json_escape(res.x.name) << "\",\n";
  os << "  \"y_name\": \"" << detail::json_escape(res.y.name) << "\",\n";
  os << "  \"observable\": \"" << detail::json_escape(res.observable) << "\",\n";
  os << "  \"x\": ";
  detail::json_array(os, res.x.values);
  os << ",\n  \"y\": ";
  detail::json_array(os, res.y.values);
  os << ",\n  \"grid\": [\n";
  for (std::size_t iy = 0; iy < res.ny(); ++iy) {
    std::vector<double> row(res.grid.begin() + static_cast<std::ptrdiff_t>(iy * res.nx()),
                            res.grid.begin() + static_cast<std::ptrdiff_t>((iy + 1) * res.nx()));
    os << "    ";
    detail::json_array(os, row);
    os << (iy + 1 < res.ny() ? ",\n" : "\n");
  }
  os << "  ],\n  \"constraint_lines\": [";
  for (std::size_t i = 0; i < res.constraint_lines.size(); ++i) {
    const auto& line = res.constraint_lines[i];
    if (i) os << ',';
    os << "\n    {\"label\": \"" << detail::json_escape(line.label)
       << "\", \"slope\": " << detail::json_number(line.slope)
       << ", \"intercept\": " << detail::json_number(line.intercept) << "}";
  }
  os << (res.constraint_lines.empty() ? "]\n" : "\n  ]\n");
  os << "}\n";
}

// Opens in binary mode so LF line endings survive on every platform.
template <typename WriteFn>
void write_file(const std::filesystem::path& path, WriteFn&& fn) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError(path.string(), "cannot open for writing");
  fn(os);
  os.flush();
  if (!os) throw ConfigError(path.string(), "write failed");
}

}  // namespace stirap
