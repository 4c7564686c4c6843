// bwrank: geodesics, distances and logarithm counts on the rank-k
// covariance stratum under the Bures-Wasserstein metric.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bwrank/bwgeom.hpp"
#include "bwrank/errors.hpp"
#include "bwrank/geodesics.hpp"
#include "bwrank/io.hpp"
#include "bwrank/kernels.hpp"
#include "bwrank/logmaps.hpp"
#include "bwrank/manifolds.hpp"
#include "bwrank/matkernels.hpp"
#include "bwrank/verify.hpp"

namespace {

using bwrank::Matrix;
using bwrank::manifolds::BundlePoint;
using bwrank::manifolds::Frame;
using bwrank::manifolds::StiefelPoint;
using bwrank::matkernels::SpdMatrix;
using bwrank::matkernels::SymMatrix;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitBreakdown = 3;
constexpr int kExitNotPsd = 4;
constexpr int kExitOracleMismatch = 5;
constexpr int kExitCertificate = 6;
constexpr int kExitReproduceFail = 7;

struct OutputTarget {
  std::string csv;
  std::string svg;
  std::vector<std::string> entries;  // svg selection; empty = changing entries
};

struct RunConfig {
  std::size_t n = 0, k = 0;
  Matrix q0, qperp0;
  Matrix d0, b0, s0;
  double t_max = 1.0;
  double dt = 1e-3;
  bwrank::geodesics::Reortho reortho = bwrank::geodesics::Reortho::on;
  std::uint64_t seed = 0;
  double rank_tol = bwrank::matkernels::kRankTol;
  double angle_tol = bwrank::matkernels::kAngleCosTol;
  std::vector<OutputTarget> outputs;
};

Matrix mat_from_json(const json& j, std::size_t rows, std::size_t cols,
                     const std::string& name) {
  if (!j.is_array() || j.size() != rows)
    throw std::runtime_error("config: " + name + " must be a " +
                             std::to_string(rows) + "x" + std::to_string(cols) +
                             " array");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != cols)
      throw std::runtime_error("config: " + name + " row " + std::to_string(i) +
                               " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number())
        throw std::runtime_error("config: " + name + " has a non-numeric entry");
      m(i, c) = row[c].get<double>();
    }
  }
  return m;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config parse error: " + std::string(e.what()));
  }

  RunConfig cfg;
  if (!j.contains("n") || !j.contains("k") || !j["n"].is_number_integer() ||
      !j["k"].is_number_integer())
    throw std::runtime_error("config: integer fields n and k are required");
  const long long n_raw = j["n"].get<long long>();
  const long long k_raw = j["k"].get<long long>();
  if (n_raw < 2 || k_raw < 1 || k_raw > n_raw)
    throw std::runtime_error("config: need n >= 2 and 1 <= k <= n");
  cfg.n = static_cast<std::size_t>(n_raw);
  cfg.k = static_cast<std::size_t>(k_raw);

  if (!j.contains("Q0") || (j["Q0"].is_string() &&
                            j["Q0"].get<std::string>() == "identity-frame")) {
    const Matrix eye = Matrix::identity(cfg.n);
    cfg.q0 = bwrank::block(eye, 0, 0, cfg.n, cfg.k);
    cfg.qperp0 = bwrank::block(eye, 0, cfg.k, cfg.n, cfg.n - cfg.k);
  } else if (j["Q0"].is_array()) {
    cfg.q0 = mat_from_json(j["Q0"], cfg.n, cfg.k, "Q0");
    cfg.qperp0 = bwrank::matkernels::complete_frame(cfg.q0);
  } else {
    throw std::runtime_error("config: Q0 must be \"identity-frame\" or a matrix");
  }

  if (!j.contains("D0")) throw std::runtime_error("config: D0 is required");
  cfg.d0 = mat_from_json(j["D0"], cfg.k, cfg.k, "D0");
  cfg.b0 = j.contains("B0")
               ? mat_from_json(j["B0"], cfg.n - cfg.k, cfg.k, "B0")
               : Matrix(cfg.n - cfg.k, cfg.k);

  const bool has_t0 = j.contains("T0"), has_s0 = j.contains("S0");
  if (has_t0 == has_s0)
    throw std::runtime_error("config: exactly one of T0 or S0 must be present");
  if (has_s0) {
    cfg.s0 = bwrank::symmetrize(mat_from_json(j["S0"], cfg.k, cfg.k, "S0"));
  } else {
    const Matrix t0 =
        bwrank::symmetrize(mat_from_json(j["T0"], cfg.k, cfg.k, "T0"));
    cfg.s0 = bwrank::matkernels::sylvester_solve_raw(cfg.d0, t0);
  }

  if (j.contains("t_max")) cfg.t_max = j["t_max"].get<double>();
  if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
  if (cfg.dt <= 0.0 || cfg.t_max < 0.0)
    throw std::runtime_error("config: need dt > 0 and t_max >= 0");
  if (j.contains("reortho")) {
    if (j["reortho"].is_boolean()) {
      cfg.reortho = j["reortho"].get<bool>() ? bwrank::geodesics::Reortho::on
                                             : bwrank::geodesics::Reortho::off;
    } else {
      const std::string v = j["reortho"].get<std::string>();
      if (v == "on")
        cfg.reortho = bwrank::geodesics::Reortho::on;
      else if (v == "off")
        cfg.reortho = bwrank::geodesics::Reortho::off;
      else
        throw std::runtime_error("config: reortho must be \"on\" or \"off\"");
    }
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (const char* env = std::getenv("BWRANK_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw std::runtime_error("BWRANK_SEED is not an integer");
    cfg.seed = v;
  }
  if (j.contains("rank_tol")) cfg.rank_tol = j["rank_tol"].get<double>();
  if (j.contains("angle_tol")) cfg.angle_tol = j["angle_tol"].get<double>();

  if (j.contains("outputs")) {
    for (const json& o : j["outputs"]) {
      OutputTarget t;
      if (o.contains("csv")) t.csv = o["csv"].get<std::string>();
      if (o.contains("svg")) t.svg = o["svg"].get<std::string>();
      if (o.contains("entries"))
        for (const json& e : o["entries"]) t.entries.push_back(e.get<std::string>());
      if (t.csv.empty() && t.svg.empty())
        throw std::runtime_error("config: output target needs csv and/or svg");
      cfg.outputs.push_back(std::move(t));
    }
  }
  if (cfg.outputs.empty()) cfg.outputs.push_back({"trajectory.csv", "", {}});
  return cfg;
}

void emit_outputs(const bwrank::geodesics::Trajectory& traj,
                  const std::vector<OutputTarget>& outputs,
                  const std::string& title) {
  namespace io = bwrank::io;
  for (const OutputTarget& t : outputs) {
    if (!t.csv.empty()) {
      io::write_trajectory_csv(t.csv, traj);
      io::write_monitors_csv(io::monitors_path_for(t.csv), traj);
    }
    if (!t.svg.empty()) {
      std::vector<io::Series> series;
      if (t.entries.empty()) {
        series = io::changing_entries(traj);
      } else {
        const std::vector<io::Series> all = io::trajectory_series(traj);
        for (const std::string& want : t.entries) {
          bool found = false;
          for (const io::Series& s : all)
            if (s.name == want) {
              series.push_back(s);
              found = true;
              break;
            }
          if (!found)
            throw std::runtime_error("unknown plot entry: " + want);
        }
      }
      io::write_svg_lines(t.svg, title, traj.times, series);
    }
  }
}

int run_geodesic(const std::string& config_path) {
  RunConfig cfg;
  bwrank::geodesics::GeodesicState s0;
  try {
    cfg = load_config(config_path);
    const BundlePoint p(Frame(StiefelPoint(cfg.q0), cfg.qperp0),
                        SpdMatrix(cfg.d0));
    s0 = bwrank::geodesics::make_state_s(p, cfg.b0, cfg.s0);
  } catch (const std::exception& e) {
    std::cerr << "bwrank geodesic: " << e.what() << "\n";
    return kExitBadInput;
  }
  try {
    const bwrank::geodesics::Trajectory traj =
        bwrank::geodesics::integrate(s0, cfg.t_max, cfg.dt, cfg.reortho);
    emit_outputs(traj, cfg.outputs, "geodesic (" + config_path + ")");
    std::cout << "wrote " << traj.times.size() << " steps to "
              << cfg.outputs.front().csv << "\n";
    return kExitOk;
  } catch (const bwrank::IntegrationError& e) {
    std::cerr << "bwrank geodesic: integration breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const std::exception& e) {
    std::cerr << "bwrank geodesic: " << e.what() << "\n";
    return kExitBadInput;
  }
}

int run_distance(const std::string& a_path, const std::string& b_path) {
  Matrix a, b;
  try {
    a = bwrank::io::read_matrix_file(a_path);
    b = bwrank::io::read_matrix_file(b_path);
  } catch (const std::exception& e) {
    std::cerr << "bwrank distance: " << e.what() << "\n";
    return kExitBadInput;
  }
  try {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
      throw bwrank::DimensionError("matrices must be square and equally sized");
    const auto check_sym = [](const Matrix& m, const char* which) {
      if (bwrank::frob_norm(m - bwrank::transpose(m)) >
          1e-8 * std::max(1.0, bwrank::frob_norm(m)))
        throw bwrank::NotPositiveDefinite(
            std::string(which) + " is not symmetric", 0.0);
    };
    check_sym(a, "first input");
    check_sym(b, "second input");

    const double formula = bwrank::bwgeom::bw_distance(a, b);

    const auto fa = bwrank::bwgeom::psd_rank_factor(a);
    const auto fb = bwrank::bwgeom::psd_rank_factor(b);
    double procrustes;
    if (fa.rank == fb.rank && fa.rank > 0) {
      procrustes = bwrank::bwgeom::bw_distance_procrustes(fa.x, fb.x);
    } else {
      double cross = 0.0;
      if (fa.rank > 0 && fb.rank > 0)
        cross = bwrank::bwgeom::nuclear_norm(bwrank::matmul_tn(fa.x, fb.x));
      procrustes = std::sqrt(
          std::max(0.0, bwrank::trace(a) + bwrank::trace(b) - 2.0 * cross));
    }

    const double diff = std::fabs(formula - procrustes);
    std::cout << "bw_distance = " << bwrank::io::format_double(formula) << "\n"
              << "procrustes  = " << bwrank::io::format_double(procrustes) << "\n"
              << "|diff|      = " << bwrank::io::format_double(diff) << "\n";
    if (diff > 1e-6) {
      std::cerr << "bwrank distance: formula and Procrustes oracle disagree by "
                << diff << "\n";
      return kExitOracleMismatch;
    }
    return kExitOk;
  } catch (const bwrank::NotPositiveDefinite& e) {
    std::cerr << "bwrank distance: not a PSD input: " << e.what() << "\n";
    return kExitNotPsd;
  } catch (const std::exception& e) {
    std::cerr << "bwrank distance: " << e.what() << "\n";
    return kExitBadInput;
  }
}

int run_logcount(const std::string& x_path, const std::string& y_path,
                 int samples, std::uint64_t seed) {
  Matrix x, y;
  try {
    x = bwrank::io::read_matrix_file(x_path);
    y = bwrank::io::read_matrix_file(y_path);
  } catch (const std::exception& e) {
    std::cerr << "bwrank logcount: " << e.what() << "\n";
    return kExitBadInput;
  }
  try {
    const bwrank::logmaps::LogRankResult lr = bwrank::logmaps::log_rank(x, y);
    const bwrank::logmaps::LogIndexParams p =
        bwrank::logmaps::log_index_params(x, y);

    std::cout << "l = " << lr.l << ", r = " << lr.r << "\n";
    std::cout << "principal angles:";
    for (double a : lr.angles) std::cout << ' ' << bwrank::io::format_double(a);
    std::cout << "\n";
    for (const std::string& w : lr.warnings) std::cout << "warning: " << w << "\n";
    for (const std::string& w : p.warnings) std::cout << "warning: " << w << "\n";

    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < samples; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));
    const std::vector<Matrix> family = bwrank::logmaps::sample_log_family(p, seeds);
    std::cout << "certified samples: " << family.size() << "\n";
    std::cout << "verdict: "
              << (lr.r == 0 ? std::string("unique")
                            : "O(r)-family with r = " + std::to_string(lr.r))
              << "\n";
    return kExitOk;
  } catch (const bwrank::CertificateError& e) {
    std::cerr << "bwrank logcount: certificate failure: " << e.what() << "\n";
    return kExitCertificate;
  } catch (const std::exception& e) {
    std::cerr << "bwrank logcount: " << e.what() << "\n";
    return kExitBadInput;
  }
}

// --- reproduce: built-in datasets of the worked examples -------------------

struct Assertions {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void expect_le(double value, double tol, const std::string& what) {
    if (!(value <= tol))
      failures.push_back(what + ": " + std::to_string(value) + " > " +
                         std::to_string(tol));
  }
};

void write_example_outputs(const bwrank::geodesics::Trajectory& traj,
                           const std::string& outdir, const std::string& id) {
  const std::string base = outdir.empty() ? id : outdir + "/" + id;
  bwrank::io::write_trajectory_csv(base + ".csv", traj);
  bwrank::io::write_monitors_csv(base + ".monitors.csv", traj);
  bwrank::io::write_svg_lines(base + ".svg", id, traj.times,
                              bwrank::io::changing_entries(traj));
}

void assert_monitors(Assertions& as, const bwrank::geodesics::Trajectory& traj,
                     double e0, double k0_norm) {
  for (std::size_t i = 0; i < traj.monitors.size(); ++i) {
    const auto& m = traj.monitors[i];
    as.expect_le(m.momentum_residual, 1e-7 * std::max(1.0, k0_norm),
                 "momentum residual at step " + std::to_string(i));
    as.expect_le(std::fabs(m.energy - e0), 1e-7 * (1.0 + std::fabs(e0)),
                 "energy drift at step " + std::to_string(i));
    as.expect_le(m.ortho_residual, 1e-8,
                 "orthogonality residual at step " + std::to_string(i));
  }
}

int run_reproduce(const std::string& id, const std::string& outdir) {
  using bwrank::geodesics::integrate;
  using bwrank::geodesics::make_state_s;
  Assertions as;
  try {
    if (id == "ex1-n2k1") {
      const double theta0 = 0.35, d0 = 1.5, b0 = 0.8, s0 = -0.3;
      Matrix q0(2, 1), qp0(2, 1), d0m(1, 1), b0m(1, 1), s0m(1, 1);
      q0(0, 0) = std::cos(theta0);
      q0(1, 0) = std::sin(theta0);
      qp0(0, 0) = -std::sin(theta0);
      qp0(1, 0) = std::cos(theta0);
      d0m(0, 0) = d0;
      b0m(0, 0) = b0;
      s0m(0, 0) = s0;
      const BundlePoint p(Frame(StiefelPoint(q0), qp0), SpdMatrix(d0m));
      const auto traj = integrate(make_state_s(p, b0m, s0m), 1.0, 1e-3);
      write_example_outputs(traj, outdir, id);

      const double r0 = s0 / b0, c = b0 * (r0 * r0 + 1.0);
      double theta_gap = 0.0, d_gap = 0.0;
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const double theta_exp =
            theta0 + std::atan(c * t + r0) - std::atan(r0);
        const double d_exp =
            d0 * ((c * t + r0) * (c * t + r0) + 1.0) / (r0 * r0 + 1.0);
        const auto& st = traj.states[i];
        theta_gap = std::max(
            theta_gap, std::fabs(std::atan2(st.q(1, 0), st.q(0, 0)) - theta_exp));
        d_gap = std::max(d_gap, std::fabs(st.d(0, 0) - d_exp));
      }
      as.expect_le(theta_gap, 1e-6, "theta(t) closed form");
      as.expect_le(d_gap, 1e-6, "d(t) closed form");

      // pullback curve is entrywise quadratic in t: constant second differences
      const auto curve = bwrank::geodesics::pullback_curve(traj);
      double dd_gap = 0.0;
      for (std::size_t e = 0; e < 4; ++e) {
        const std::size_t i0 = e / 2, j0 = e % 2;
        double ref = 0.0;
        for (std::size_t s = 10; s + 10 < curve.size(); s += 10) {
          const double dd = curve[s - 10].sigma()(i0, j0) -
                            2.0 * curve[s].sigma()(i0, j0) +
                            curve[s + 10].sigma()(i0, j0);
          if (s == 10)
            ref = dd;
          else
            dd_gap = std::max(dd_gap, std::fabs(dd - ref));
        }
      }
      as.expect_le(dd_gap, 1e-6, "Sigma(t) second differences constant");
      assert_monitors(as, traj, bwrank::geodesics::energy(traj.states.front()),
                      bwrank::frob_norm(bwrank::geodesics::momentum(traj.states.front())));
    } else if (id == "ex2-nk1") {
      Matrix q0(4, 1);
      q0(0, 0) = 0.7;
      q0(1, 0) = -0.5;
      q0(2, 0) = 0.4;
      q0(3, 0) = 0.3;
      const double qn = bwrank::frob_norm(q0);
      q0 *= 1.0 / qn;
      Matrix b0(3, 1);
      b0(0, 0) = 0.5;
      b0(1, 0) = -0.3;
      b0(2, 0) = 0.2;
      const double d0 = 1.3, s0 = 0.25;
      Matrix d0m(1, 1), s0m(1, 1);
      d0m(0, 0) = d0;
      s0m(0, 0) = s0;
      const Matrix qperp = bwrank::matkernels::complete_frame(q0);
      const BundlePoint p(Frame(StiefelPoint(q0), qperp), SpdMatrix(d0m));
      const auto traj = integrate(make_state_s(p, b0, s0m), 1.0, 1e-3);
      write_example_outputs(traj, outdir, id);

      double gap = 0.0;
      for (std::size_t i = 0; i < traj.times.size(); i += 10) {
        const auto k1 =
            bwrank::geodesics::k1_geodesic(q0, d0, b0, s0, traj.times[i]);
        gap = std::max(gap, bwrank::frob_norm(traj.states[i].q - k1.q));
        gap = std::max(gap, std::fabs(traj.states[i].d(0, 0) - k1.d));
      }
      as.expect_le(gap, 1e-6, "rank-one closed form");
      assert_monitors(as, traj, bwrank::geodesics::energy(traj.states.front()),
                      bwrank::frob_norm(bwrank::geodesics::momentum(traj.states.front())));
    } else if (id == "ex3-a" || id == "ex3-b") {
      Matrix b0(2, 3), t0(3, 3);
      if (id == "ex3-a") {
        b0(0, 0) = 0.5;
        b0(1, 1) = 0.5;
        t0 = 0.5 * Matrix::identity(3);
      } else {
        b0 = 0.5 * Matrix{{1.0, 0.5, -0.4}, {-0.6, 1.0, 0.0}};
        t0 = 0.5 * Matrix{{0.3, -0.7, 0.4}, {1.0, -0.5, 0.2}, {-1.0, 1.0, 0.0}};
      }
      const Matrix eye5 = Matrix::identity(5);
      const Frame frame(StiefelPoint(bwrank::block(eye5, 0, 0, 5, 3)),
                        bwrank::block(eye5, 0, 3, 5, 2));
      const BundlePoint p(frame, SpdMatrix(Matrix::identity(3)));
      const Matrix s0 = bwrank::matkernels::sylvester_solve_raw(
          Matrix::identity(3), bwrank::symmetrize(t0));
      const auto traj = integrate(make_state_s(p, b0, s0), 1.0, 1e-3);
      write_example_outputs(traj, outdir, id);

      if (id == "ex3-a") {
        double gap = 0.0;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
          const double t = traj.times[i];
          const double r = 0.5 + 0.625 * t;
          const double theta = std::atan(r) - std::atan(0.5);
          const auto& st = traj.states[i];
          const double vals[][2] = {
              {st.d(0, 0), 0.8 * (1 + r * r)},
              {st.d(1, 1), 0.8 * (1 + r * r)},
              {st.d(2, 2), (1 + 0.25 * t) * (1 + 0.25 * t)},
              {st.b(0, 0), 5.0 / (8.0 * (1 + r * r))},
              {st.b(1, 1), 5.0 / (8.0 * (1 + r * r))},
              {st.s(0, 0), 5.0 * r / (8.0 * (1 + r * r))},
              {st.s(1, 1), 5.0 * r / (8.0 * (1 + r * r))},
              {st.s(2, 2), 0.25 / (1 + 0.25 * t)},
              {st.q(0, 0), std::cos(theta)},
              {st.q(1, 1), std::cos(theta)},
              {st.q(3, 0), std::sin(theta)},
              {st.q(4, 1), std::sin(theta)},
              {st.q(2, 2), 1.0},
          };
          for (const auto& v : vals) gap = std::max(gap, std::fabs(v[0] - v[1]));
        }
        as.expect_le(gap, 1e-6, "example-3 closed forms");
        const auto& last = traj.states.back();
        as.expect_le(std::fabs(last.d(0, 0) - 1.8125), 1e-6, "d1(1) spot value");
        as.expect_le(std::fabs(last.s(0, 0) - 9.0 / 29.0), 1e-6, "s1(1) spot value");
        as.expect_le(std::fabs(last.d(2, 2) - 1.5625), 1e-6, "d3(1) spot value");
        as.expect_le(std::fabs(last.s(2, 2) - 0.2), 1e-6, "s3(1) spot value");
      }
      assert_monitors(as, traj, bwrank::geodesics::energy(traj.states.front()),
                      bwrank::frob_norm(bwrank::geodesics::momentum(traj.states.front())));
    } else {
      std::cerr << "bwrank reproduce: unknown example id '" << id
                << "' (expected ex1-n2k1, ex2-nk1, ex3-a, ex3-b)\n";
      return kExitBadInput;
    }
  } catch (const std::exception& e) {
    std::cerr << "bwrank reproduce: " << e.what() << "\n";
    return kExitBadInput;
  }

  if (!as.failures.empty()) {
    for (const std::string& f : as.failures)
      std::cerr << "FAIL " << id << ": " << f << "\n";
    return kExitReproduceFail;
  }
  std::cout << id << ": all assertions passed\n";
  return kExitOk;
}

int run_verify(std::uint64_t seed, int trials, double dt) {
  bwrank::verify::Options opt;
  opt.seed = seed;
  opt.trials = trials;
  opt.dt = dt;
  const auto results = bwrank::verify::run_all(opt);
  if (results.empty()) {
    std::cout << "verify: 0 trials requested, vacuous pass\n";
    return kExitOk;
  }
  bool all_pass = true;
  std::printf("%-4s  %-42s  %s\n", "", "property", "detail");
  for (const auto& r : results) {
    std::printf("%-4s  %-42s  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  std::printf("%zu/%zu properties passed (backend: %s)\n",
              static_cast<std::size_t>(
                  std::count_if(results.begin(), results.end(),
                                [](const auto& r) { return r.pass; })),
              results.size(),
              bwrank::kernels::backend_name(bwrank::kernels::active_backend()));
  return all_pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures-Wasserstein geometry of the rank-k covariance stratum"};
  app.require_subcommand(1);

  std::string config_path, a_path, b_path, x_path, y_path, example_id;
  std::string outdir = ".";
  int samples = 10;
  int trials = 10;
  std::uint64_t seed = 0;
  double dt = 1e-3;

  CLI::App* geodesic = app.add_subcommand(
      "geodesic", "Integrate the geodesic system from a JSON config");
  geodesic->add_option("config", config_path, "JSON run configuration")->required();

  CLI::App* distance = app.add_subcommand(
      "distance", "Bures-Wasserstein distance between two PSD matrix files");
  distance->add_option("A", a_path, "first PSD matrix file")->required();
  distance->add_option("B", b_path, "second PSD matrix file")->required();

  CLI::App* logcount = app.add_subcommand(
      "logcount", "Logarithm multiplicity report for two n×k factors");
  logcount->add_option("X", x_path, "first factor file")->required();
  logcount->add_option("Y", y_path, "second factor file")->required();
  logcount->add_option("--samples", samples, "seeds to draw from O(r)")
      ->default_val(10);
  logcount->add_option("--seed", seed, "base seed for the O(r) draws")
      ->default_val(1);

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Re-run a built-in worked example and assert its closed forms");
  reproduce->add_option("id", example_id, "ex1-n2k1 | ex2-nk1 | ex3-a | ex3-b")
      ->required();
  reproduce->add_option("--outdir", outdir, "directory for emitted files");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the randomized invariant suite of every module");
  verify->add_option("--seed", seed, "random seed")->default_val(0);
  verify->add_option("--trials", trials, "trials per property")->default_val(10);
  verify->add_option("--dt", dt, "integrator step for the geodesic properties")
      ->default_val(1e-3);

  int rc = kExitOk;
  geodesic->callback([&] { rc = run_geodesic(config_path); });
  distance->callback([&] { rc = run_distance(a_path, b_path); });
  logcount->callback([&] { rc = run_logcount(x_path, y_path, samples, seed); });
  reproduce->callback([&] { rc = run_reproduce(example_id, outdir); });
  verify->callback([&] { rc = run_verify(seed, trials, dt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }
  return rc;
}
