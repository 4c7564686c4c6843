#pragma once

#include <string>
#include <vector>

#include "bwrank/geodesics.hpp"
#include "bwrank/matrix.hpp"

namespace bwrank::io {

/// Plain-text matrix format: one row per line, whitespace-separated decimals.
/// Blank lines and lines starting with '#' are skipped.
Matrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

/// Round-trip formatting used by all emitted files (%.17g).
std::string format_double(double x);

/// One CSV row per recorded step: t, then Q, D, B, S entries in row-major
/// order with headers Q[i][j] etc.
void write_trajectory_csv(const std::string& path,
                          const geodesics::Trajectory& traj);

/// Sibling monitors file: t, energy, momentum residual, orthogonality
/// residual, reorthogonalization correction.
void write_monitors_csv(const std::string& path,
                        const geodesics::Trajectory& traj);

/// "out.csv" -> "out.monitors.csv"
std::string monitors_path_for(const std::string& csv_path);

struct Series {
  std::string name;
  std::vector<double> values;
};

/// All state entries addressable by header name.
std::vector<Series> trajectory_series(const geodesics::Trajectory& traj);

/// Entries whose range over the trajectory exceeds tol (the default plot
/// selection: entries not plotted are constant).
std::vector<Series> changing_entries(const geodesics::Trajectory& traj,
                                     double tol = 1e-12);

/// Deterministic SVG line plot of the given series against time.
void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<double>& times,
                     const std::vector<Series>& series);

}  // namespace bwrank::io
