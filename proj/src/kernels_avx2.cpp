// AVX2+FMA variants of the arithmetic kernels. Compiled into every build;
// the dispatcher only installs this table after a cpuid check, so the
// target-attributed functions never execute on unsupported hardware.

#include "kernels_detail.hpp"

#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#define BWRANK_X86 1
#include <immintrin.h>
#else
#define BWRANK_X86 0
#endif

namespace bwrank::kernels::detail {

#if BWRANK_X86

#define BWRANK_AVX2 __attribute__((target("avx2,fma")))

namespace {

BWRANK_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

BWRANK_AVX2 double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    i += 4;
  }
  double r = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

BWRANK_AVX2 double sum_sq_avx2(const double* x, std::size_t n) {
  return dot_avx2(x, x, n);
}

BWRANK_AVX2 void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

BWRANK_AVX2 void add_scaled_avx2(const double* x, double a, const double* z,
                                 double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(va, _mm256_loadu_pd(z + i), _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, v);
  }
  for (; i < n; ++i) y[i] = x[i] + a * z[i];
}

BWRANK_AVX2 void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

BWRANK_AVX2 void rot_avx2(double c, double s, double* x, double* y, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fmsub_pd(vc, vx, _mm256_mul_pd(vs, vy)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, vx, _mm256_mul_pd(vc, vy)));
  }
  for (; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

BWRANK_AVX2 void gemm_nn_avx2(std::size_t m, std::size_t p, std::size_t n,
                              const double* a, const double* b, double* c) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < p; ++l)
      axpy_avx2(a[i * p + l], b + l * n, c + i * n, n);
}

BWRANK_AVX2 void gemm_nt_avx2(std::size_t m, std::size_t p, std::size_t n,
                              const double* a, const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c[i * n + j] = dot_avx2(a + i * p, b + j * p, p);
}

BWRANK_AVX2 void gemm_tn_avx2(std::size_t m, std::size_t p, std::size_t n,
                              const double* a, const double* b, double* c) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t l = 0; l < p; ++l)
    for (std::size_t i = 0; i < m; ++i)
      axpy_avx2(a[l * m + i], b + l * n, c + i * n, n);
}

constexpr OpsTable kAvx2Table = {
    dot_avx2,        sum_sq_avx2, axpy_avx2,
    add_scaled_avx2, scale_avx2,  rot_avx2,
    gemm_nn_avx2,    gemm_nt_avx2, gemm_tn_avx2,
};

}  // namespace

const OpsTable* avx2_table() { return &kAvx2Table; }

bool cpu_supports_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else  // !BWRANK_X86

const OpsTable* avx2_table() { return nullptr; }
bool cpu_supports_avx2() { return false; }

#endif

}  // namespace bwrank::kernels::detail
