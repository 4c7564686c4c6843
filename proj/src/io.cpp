#include "bwrank/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bwrank::io {

namespace {

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void append_block_series(std::vector<Series>& out, const char* name,
                         const geodesics::Trajectory& traj,
                         const Matrix geodesics::GeodesicState::*member) {
  if (traj.states.empty()) return;
  const Matrix& first = traj.states.front().*member;
  for (std::size_t i = 0; i < first.rows(); ++i) {
    for (std::size_t j = 0; j < first.cols(); ++j) {
      Series s;
      s.name = std::string(name) + "[" + std::to_string(i) + "][" +
               std::to_string(j) + "]";
      s.values.reserve(traj.states.size());
      for (const auto& st : traj.states) s.values.push_back((st.*member)(i, j));
      out.push_back(std::move(s));
    }
  }
}

}  // namespace

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(tok, &pos);
      } catch (const std::exception&) {
        throw std::runtime_error("bad number '" + tok + "' in " + path);
      }
      if (pos != tok.size())
        throw std::runtime_error("bad number '" + tok + "' in " + path);
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("ragged rows in matrix file: " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty matrix file: " + path);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file: " + path);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<Series> trajectory_series(const geodesics::Trajectory& traj) {
  std::vector<Series> out;
  append_block_series(out, "Q", traj, &geodesics::GeodesicState::q);
  append_block_series(out, "D", traj, &geodesics::GeodesicState::d);
  append_block_series(out, "B", traj, &geodesics::GeodesicState::b);
  append_block_series(out, "S", traj, &geodesics::GeodesicState::s);
  return out;
}

std::vector<Series> changing_entries(const geodesics::Trajectory& traj, double tol) {
  std::vector<Series> out;
  for (Series& s : trajectory_series(traj)) {
    const auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
    if (*hi - *lo > tol) out.push_back(std::move(s));
  }
  return out;
}

void write_trajectory_csv(const std::string& path,
                          const geodesics::Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  const std::vector<Series> series = trajectory_series(traj);
  out << "t";
  for (const Series& s : series) out << ',' << s.name;
  out << '\n';
  for (std::size_t step = 0; step < traj.times.size(); ++step) {
    out << format_double(traj.times[step]);
    for (const Series& s : series) out << ',' << format_double(s.values[step]);
    out << '\n';
  }
}

void write_monitors_csv(const std::string& path,
                        const geodesics::Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write csv: " + path);
  out << "t,energy,momentum_residual,orthogonality_residual,reortho_correction\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& m = traj.monitors[i];
    out << format_double(traj.times[i]) << ',' << format_double(m.energy) << ','
        << format_double(m.momentum_residual) << ','
        << format_double(m.ortho_residual) << ','
        << format_double(m.reortho_correction) << '\n';
  }
}

std::string monitors_path_for(const std::string& csv_path) {
  const std::size_t dot = csv_path.rfind('.');
  if (dot == std::string::npos) return csv_path + ".monitors.csv";
  return csv_path.substr(0, dot) + ".monitors" + csv_path.substr(dot);
}

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& times,
                     const std::vector<Series>& series) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write svg: " + path);

  const double width = 860, height = 520;
  const double ml = 70, mr = 200, mt = 46, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double tmin = 0, tmax = 1, ymin = 0, ymax = 1;
  if (!times.empty()) {
    tmin = times.front();
    tmax = times.back();
  }
  bool have_y = false;
  for (const Series& s : series)
    for (double v : s.values) {
      if (!have_y) {
        ymin = ymax = v;
        have_y = true;
      } else {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
      }
    }
  if (tmax <= tmin) tmax = tmin + 1.0;
  if (!have_y || ymax <= ymin) {
    ymax = ymin + 1.0;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  const auto px = [&](double t) { return ml + pw * (t - tmin) / (tmax - tmin); };
  const auto py = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // axis labels: corners of the data box
  out << "<text x=\"" << ml << "\" y=\"" << height - mb + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">t=" << fmt6(tmin)
      << "</text>\n";
  out << "<text x=\"" << ml + pw - 40 << "\" y=\"" << height - mb + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">t=" << fmt6(tmax)
      << "</text>\n";
  out << "<text x=\"8\" y=\"" << py(ymin)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt6(ymin)
      << "</text>\n";
  out << "<text x=\"8\" y=\"" << py(ymax) + 10
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt6(ymax)
      << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.4\" points=\"";
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i) out << ' ';
      out << fmt6(px(times[i])) << ',' << fmt6(py(series[si].values[i]));
    }
    out << "\"/>\n";
    // legend
    const double ly = mt + 16.0 * static_cast<double>(si);
    if (ly < height - mb) {
      out << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\""
          << ml + pw + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
      out << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly + 4
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[si].name
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace bwrank::io
