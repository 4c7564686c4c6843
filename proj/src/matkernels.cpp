#include "bwrank/matkernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "bwrank/errors.hpp"
#include "bwrank/kernels.hpp"
#include "bwrank/random.hpp"

namespace bwrank::matkernels {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxJacobiSweeps = 60;

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

/// (c, s) diagonalizing the 2x2 symmetric block [[app, apq], [apq, aqq]].
void jacobi_rotation(double app, double aqq, double apq, double& c, double& s) {
  const double tau = (aqq - app) / (2.0 * apq);
  double t;
  if (std::fabs(tau) > 1e150) {
    t = 1.0 / (2.0 * tau);
  } else {
    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
  }
  c = 1.0 / std::sqrt(1.0 + t * t);
  s = t * c;
}

/// Largest-magnitude entry positive; ties resolved by lowest row index.
void fix_column_sign(Matrix& m, std::size_t col) {
  std::size_t arg = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double a = std::fabs(m(i, col));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (m(arg, col) < 0.0)
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, col) = -m(i, col);
}

double off_diag_norm_sq(const Matrix& w) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j)
      if (i != j) acc += w(i, j) * w(i, j);
  return acc;
}

}  // namespace

double spd_eig_floor(std::size_t dim, double lambda_max) {
  return static_cast<double>(dim) * kEps * lambda_max;
}

SymMatrix::SymMatrix(const Matrix& a) {
  require(a.rows() == a.cols(), "SymMatrix: matrix not square");
  if (!all_finite(a)) throw std::invalid_argument("SymMatrix: non-finite entries");
  m_ = symmetrize(a);
}

SymMatrix SymMatrix::zero(std::size_t k) { return SymMatrix(Matrix(k, k)); }
SymMatrix SymMatrix::identity(std::size_t k) { return SymMatrix(Matrix::identity(k)); }

SpdMatrix::SpdMatrix(const Matrix& a) : SpdMatrix(SymMatrix(a)) {}

SpdMatrix::SpdMatrix(const SymMatrix& a) : s_(a) {
  const EigenPair e = sym_eig(s_);
  if (e.values.empty()) return;
  const double lo = e.values.front(), hi = e.values.back();
  const double floor = spd_eig_floor(s_.dim(), hi);
  if (hi <= 0.0 || lo <= floor)
    throw NotPositiveDefinite(
        "SpdMatrix: eigenvalue " + std::to_string(lo) + " at or below floor " +
            std::to_string(floor),
        lo);
}

EigenPair sym_eig(const SymMatrix& a) {
  const std::size_t k = a.dim();
  Matrix w = a.entries();
  Matrix vt = Matrix::identity(k);  // rows are eigenvector candidates

  const double norm_a = frob_norm(w);
  const double stop = 1e-14 * std::max(norm_a, 1e-300);
  if (k > 1) {
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
      if (std::sqrt(off_diag_norm_sq(w)) <= stop) break;
      for (std::size_t p = 0; p + 1 < k; ++p) {
        for (std::size_t q = p + 1; q < k; ++q) {
          const double apq = w(p, q);
          if (apq == 0.0) continue;
          double c, s;
          jacobi_rotation(w(p, p), w(q, q), apq, c, s);
          // right-multiply by J: mix columns p and q
          for (std::size_t i = 0; i < k; ++i) {
            const double wip = w(i, p), wiq = w(i, q);
            w(i, p) = c * wip - s * wiq;
            w(i, q) = s * wip + c * wiq;
          }
          // left-multiply by J^T: mix rows p and q
          kernels::rot(c, s, w.row(p), w.row(q), k);
          kernels::rot(c, s, vt.row(p), vt.row(q), k);
        }
      }
    }
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return w(i, i) < w(j, j); });

  EigenPair out;
  out.values.resize(k);
  out.vectors = Matrix(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = w(order[j], order[j]);
    for (std::size_t i = 0; i < k; ++i) out.vectors(i, j) = vt(order[j], i);
    fix_column_sign(out.vectors, j);
  }
  return out;
}

double max_abs_eig(const EigenPair& e) {
  if (e.values.empty()) return 0.0;
  return std::max(std::fabs(e.values.front()), std::fabs(e.values.back()));
}

Matrix sylvester_solve_raw(const Matrix& d, const Matrix& t) {
  require(d.rows() == d.cols() && t.rows() == t.cols() && d.rows() == t.rows(),
          "sylvester_solve: dimension mismatch");
  const std::size_t k = d.rows();
  const EigenPair e = sym_eig(SymMatrix(d));
  const double hi = e.values.empty() ? 0.0 : e.values.back();
  const double floor = spd_eig_floor(k, hi);
  if (k > 0 && (hi <= 0.0 || e.values.front() <= floor))
    throw NotPositiveDefinite(
        "sylvester_solve: D eigenvalue " + std::to_string(e.values.front()) +
            " at or below floor " + std::to_string(floor),
        e.values.empty() ? 0.0 : e.values.front());

  Matrix tt = matmul_tn(e.vectors, matmul(symmetrize(t), e.vectors));  // V^T T V
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      tt(i, j) /= e.values[i] + e.values[j];
  return symmetrize(matmul(e.vectors, matmul_nt(tt, e.vectors)));
}

SymMatrix sylvester_solve(const SpdMatrix& d, const SymMatrix& t) {
  require(d.dim() == t.dim(), "sylvester_solve: dimension mismatch");
  return SymMatrix(sylvester_solve_raw(d.entries(), t.entries()));
}

SymMatrix psd_sqrt(const SymMatrix& a) {
  EigenPair e = sym_eig(a);
  const double amax = max_abs_eig(e);
  const double tol = 1e-10 * amax;
  for (double& lam : e.values) {
    if (lam < -tol)
      throw NotPositiveDefinite(
          "psd_sqrt: eigenvalue " + std::to_string(lam) +
              " below clamp threshold " + std::to_string(-tol),
          lam);
    lam = (std::fabs(lam) <= tol) ? 0.0 : std::sqrt(lam);
  }
  const std::size_t k = a.dim();
  Matrix sv(k, k);  // V * sqrt(Λ)
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) sv(i, j) = e.vectors(i, j) * e.values[j];
  return SymMatrix(matmul_nt(sv, e.vectors));
}

ThinSvd thin_svd(const Matrix& a) {
  const std::size_t n = a.rows(), k = a.cols();
  require(n >= k, "thin_svd: requires rows >= cols");
  if (!all_finite(a)) throw std::invalid_argument("thin_svd: non-finite entries");

  Matrix w = transpose(a);            // k rows of length n: columns of a
  Matrix vt = Matrix::identity(k);    // rows are right singular vectors

  if (k > 1) {
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
      bool converged = true;
      for (std::size_t p = 0; p + 1 < k; ++p) {
        for (std::size_t q = p + 1; q < k; ++q) {
          const double alpha = kernels::sum_sq(w.row(p), n);
          const double beta = kernels::sum_sq(w.row(q), n);
          const double gamma = kernels::dot(w.row(p), w.row(q), n);
          if (alpha == 0.0 || beta == 0.0) continue;
          if (std::fabs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
          converged = false;
          double c, s;
          jacobi_rotation(alpha, beta, gamma, c, s);
          kernels::rot(c, s, w.row(p), w.row(q), n);
          kernels::rot(c, s, vt.row(p), vt.row(q), k);
        }
      }
      if (converged) break;
    }
  }

  std::vector<double> sig(k);
  for (std::size_t j = 0; j < k; ++j) sig[j] = std::sqrt(kernels::sum_sq(w.row(j), n));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sig[i] > sig[j]; });

  ThinSvd out;
  out.sigma.resize(k);
  out.u = Matrix(n, k);
  out.v = Matrix(k, k);
  const double sig_max = k ? sig[order[0]] : 0.0;
  const double zero_cut = 1e-13 * sig_max;

  std::vector<std::size_t> empty_slots;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = sig[src];
    for (std::size_t i = 0; i < k; ++i) out.v(i, j) = vt(src, i);
    if (sig[src] > zero_cut && sig[src] > 0.0) {
      const double inv = 1.0 / sig[src];
      for (std::size_t i = 0; i < n; ++i) out.u(i, j) = w(src, i) * inv;
    } else {
      empty_slots.push_back(j);
    }
  }

  // Deterministic completion of numerically-zero columns: first standard
  // basis vector with a large residual against the columns fixed so far.
  for (std::size_t slot : empty_slots) {
    bool placed = false;
    for (std::size_t cand = 0; cand < n && !placed; ++cand) {
      Matrix v(n, 1);
      v(cand, 0) = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < k; ++j) {
          if (j == slot || (std::find(empty_slots.begin(), empty_slots.end(), j) !=
                                empty_slots.end() &&
                            j > slot))
            continue;  // skip self and not-yet-filled slots
          double proj = 0.0;
          for (std::size_t i = 0; i < n; ++i) proj += out.u(i, j) * v(i, 0);
          for (std::size_t i = 0; i < n; ++i) v(i, 0) -= proj * out.u(i, j);
        }
      }
      const double nv = frob_norm(v);
      if (nv > 0.5) {
        for (std::size_t i = 0; i < n; ++i) out.u(i, slot) = v(i, 0) / nv;
        placed = true;
      }
    }
    if (!placed)
      throw std::runtime_error("thin_svd: basis completion failed");
  }

  for (std::size_t j = 0; j < k; ++j) {
    // joint sign flip keeps u σ v^T invariant
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::fabs(out.u(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (out.u(arg, j) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) out.u(i, j) = -out.u(i, j);
      for (std::size_t i = 0; i < k; ++i) out.v(i, j) = -out.v(i, j);
    }
  }
  return out;
}

QrFull householder_qr(const Matrix& a) {
  const std::size_t n = a.rows(), k = a.cols();
  QrFull f{Matrix::identity(n), a};
  std::vector<double> v(n);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t m = n - j;
    double norm_sq = 0.0;
    for (std::size_t i = j; i < n; ++i) norm_sq += f.r(i, j) * f.r(i, j);
    const double normx = std::sqrt(norm_sq);
    if (normx == 0.0) continue;
    const double x0 = f.r(j, j);
    const double alpha = (x0 >= 0.0) ? -normx : normx;
    for (std::size_t i = 0; i < m; ++i) v[i] = f.r(j + i, j);
    v[0] -= alpha;
    const double vsq = kernels::sum_sq(v.data(), m);
    if (vsq == 0.0) continue;
    const double beta = 2.0 / vsq;
    // R <- H R on the trailing block
    for (std::size_t c = j; c < k; ++c) {
      double wdot = 0.0;
      for (std::size_t i = 0; i < m; ++i) wdot += v[i] * f.r(j + i, c);
      wdot *= beta;
      for (std::size_t i = 0; i < m; ++i) f.r(j + i, c) -= wdot * v[i];
    }
    // Q <- Q H, row-wise (contiguous tails)
    for (std::size_t i = 0; i < n; ++i) {
      double* qrow = f.q.row(i) + j;
      const double wdot = beta * kernels::dot(qrow, v.data(), m);
      kernels::axpy(-wdot, v.data(), qrow, m);
    }
  }
  return f;
}

Matrix complete_frame(const Matrix& q) {
  const std::size_t n = q.rows(), k = q.cols();
  require(n >= k, "complete_frame: more columns than rows");
  if (n == k) return Matrix(n, 0);
  const QrFull f = householder_qr(q);
  Matrix qperp = block(f.q, 0, k, n, n - k);
  for (std::size_t j = 0; j < qperp.cols(); ++j) fix_column_sign(qperp, j);
  return qperp;
}

Matrix random_orthogonal(std::size_t r, std::uint64_t seed, int det_sign_want) {
  if (det_sign_want != 1 && det_sign_want != -1)
    throw std::invalid_argument("random_orthogonal: det_sign must be +1 or -1");
  if (r == 0) return Matrix(0, 0);
  rng::Generator gen(seed);
  Matrix g = rng::normal_matrix(gen, r, r);
  QrFull f = householder_qr(g);
  for (std::size_t j = 0; j < r; ++j)
    if (f.r(j, j) < 0.0)
      for (std::size_t i = 0; i < r; ++i) f.q(i, j) = -f.q(i, j);
  if (det_sign(f.q) != det_sign_want)
    for (std::size_t i = 0; i < r; ++i) f.q(i, r - 1) = -f.q(i, r - 1);
  return f.q;
}

Matrix spd_inverse_raw(const Matrix& d) {
  const std::size_t k = d.rows();
  const EigenPair e = sym_eig(SymMatrix(d));
  const double hi = e.values.empty() ? 0.0 : e.values.back();
  const double floor = spd_eig_floor(k, hi);
  if (k > 0 && (hi <= 0.0 || e.values.front() <= floor))
    throw NotPositiveDefinite(
        "spd_inverse: eigenvalue " + std::to_string(e.values.front()) +
            " at or below floor " + std::to_string(floor),
        e.values.empty() ? 0.0 : e.values.front());
  Matrix vi(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) vi(i, j) = e.vectors(i, j) / e.values[j];
  return symmetrize(matmul_nt(vi, e.vectors));
}

Matrix lu_solve(Matrix a, Matrix b) {
  require(a.rows() == a.cols(), "lu_solve: matrix not square");
  require(a.rows() == b.rows(), "lu_solve: rhs rows mismatch");
  const std::size_t n = a.rows(), m = b.cols();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
    if (std::fabs(a(piv, col)) < 1e-250)
      throw std::domain_error("lu_solve: matrix numerically singular");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(b(col, j), b(piv, j));
    }
    const double inv = 1.0 / a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double factor = a(i, col) * inv;
      if (factor == 0.0) continue;
      kernels::axpy(-factor, a.row(col) + col, a.row(i) + col, n - col);
      kernels::axpy(-factor, b.row(col), b.row(i), m);
    }
  }
  // back substitution
  for (std::size_t ip1 = n; ip1 > 0; --ip1) {
    const std::size_t i = ip1 - 1;
    for (std::size_t j = 0; j < m; ++j) {
      double acc = b(i, j);
      for (std::size_t l = i + 1; l < n; ++l) acc -= a(i, l) * b(l, j);
      b(i, j) = acc / a(i, i);
    }
  }
  return b;
}

int det_sign(Matrix a) {
  require(a.rows() == a.cols(), "det_sign: matrix not square");
  const std::size_t n = a.rows();
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(a(i, col)) > std::fabs(a(piv, col))) piv = i;
    if (a(piv, col) == 0.0) return 0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      sign = -sign;
    }
    if (a(col, col) < 0.0) sign = -sign;
    const double inv = 1.0 / a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double factor = a(i, col) * inv;
      if (factor != 0.0)
        kernels::axpy(-factor, a.row(col) + col, a.row(i) + col, n - col);
    }
  }
  return sign;
}

}  // namespace bwrank::matkernels
