#include "bwrank/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "kernels_detail.hpp"

namespace bwrank::kernels {

namespace {

// --- scalar reference kernels -------------------------------------------

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_scaled_scalar(const double* x, double a, const double* z, double* y,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * z[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void rot_scalar(double c, double s, double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void gemm_nn_scalar(std::size_t m, std::size_t p, std::size_t n,
                    const double* a, const double* b, double* c) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < p; ++l)
      axpy_scalar(a[i * p + l], b + l * n, c + i * n, n);
}

void gemm_nt_scalar(std::size_t m, std::size_t p, std::size_t n,
                    const double* a, const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c[i * n + j] = dot_scalar(a + i * p, b + j * p, p);
}

void gemm_tn_scalar(std::size_t m, std::size_t p, std::size_t n,
                    const double* a, const double* b, double* c) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t l = 0; l < p; ++l)
    for (std::size_t i = 0; i < m; ++i)
      axpy_scalar(a[l * m + i], b + l * n, c + i * n, n);
}

constexpr detail::OpsTable kScalarTable = {
    dot_scalar,    sum_sq_scalar,  axpy_scalar,
    add_scaled_scalar, scale_scalar, rot_scalar,
    gemm_nn_scalar, gemm_nt_scalar, gemm_tn_scalar,
};

const detail::OpsTable* g_active = nullptr;
Backend g_backend = Backend::scalar;

void select_initial() {
  Backend want = Backend::avx2;
  if (const char* env = std::getenv("BWRANK_SIMD")) {
    const std::string v(env);
    if (v == "scalar") want = Backend::scalar;
    else if (v == "avx2") want = Backend::avx2;
    // anything else (incl. "auto") keeps the default
  }
  if (want == Backend::avx2 && detail::cpu_supports_avx2() &&
      detail::avx2_table() != nullptr) {
    g_active = detail::avx2_table();
    g_backend = Backend::avx2;
  } else {
    g_active = &kScalarTable;
    g_backend = Backend::scalar;
  }
}

inline const detail::OpsTable& ops() {
  static const bool inited = (select_initial(), true);
  (void)inited;
  return *g_active;
}

}  // namespace

Backend active_backend() {
  ops();
  return g_backend;
}

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool cpu_has_avx2() { return detail::cpu_supports_avx2(); }

void set_backend(Backend b) {
  ops();  // make sure initialization ran
  if (b == Backend::avx2) {
    if (!detail::cpu_supports_avx2() || detail::avx2_table() == nullptr)
      throw std::invalid_argument("kernels::set_backend: avx2 not supported on this CPU");
    g_active = detail::avx2_table();
  } else {
    g_active = &kScalarTable;
  }
  g_backend = b;
}

double dot(const double* x, const double* y, std::size_t n) { return ops().dot(x, y, n); }
double sum_sq(const double* x, std::size_t n) { return ops().sum_sq(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { ops().axpy(a, x, y, n); }
void add_scaled(const double* x, double a, const double* z, double* y, std::size_t n) {
  ops().add_scaled(x, a, z, y, n);
}
void scale(double a, double* x, std::size_t n) { ops().scale(a, x, n); }
void rot(double c, double s, double* x, double* y, std::size_t n) { ops().rot(c, s, x, y, n); }
void gemm_nn(std::size_t m, std::size_t p, std::size_t n, const double* a,
             const double* b, double* c) { ops().gemm_nn(m, p, n, a, b, c); }
void gemm_nt(std::size_t m, std::size_t p, std::size_t n, const double* a,
             const double* b, double* c) { ops().gemm_nt(m, p, n, a, b, c); }
void gemm_tn(std::size_t m, std::size_t p, std::size_t n, const double* a,
             const double* b, double* c) { ops().gemm_tn(m, p, n, a, b, c); }

}  // namespace bwrank::kernels
