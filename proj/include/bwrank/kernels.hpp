#pragma once

#include <cstddef>

namespace bwrank::kernels {

/// Instruction-set variants of the arithmetic kernels. The scalar versions
/// are the reference implementations; the avx2 versions are selected at
/// runtime when the CPU supports AVX2+FMA. The two are equivalence-tested
/// against each other (they differ only in rounding/summation order).
enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name(Backend b);
bool cpu_has_avx2();

/// Force a backend at runtime. Throws std::invalid_argument if the CPU
/// does not support it. The env var BWRANK_SIMD=scalar|avx2|auto picks the
/// initial backend (default: auto).
void set_backend(Backend b);

// --- vector primitives ------------------------------------------------

double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);

// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);
// y = x + a*z  (the RK stage combination)
void add_scaled(const double* x, double a, const double* z, double* y, std::size_t n);
// x *= a
void scale(double a, double* x, std::size_t n);
// plane rotation: (x, y) <- (c*x - s*y, s*x + c*y)
void rot(double c, double s, double* x, double* y, std::size_t n);

// --- row-major matrix products ----------------------------------------
//
//   gemm_nn: C(m,n)  = A(m,p) * B(p,n)
//   gemm_nt: C(m,n)  = A(m,p) * B(n,p)^T
//   gemm_tn: C(m,n)  = A(p,m)^T * B(p,n)
//
// C is overwritten and must not alias A or B.

void gemm_nn(std::size_t m, std::size_t p, std::size_t n,
             const double* a, const double* b, double* c);
void gemm_nt(std::size_t m, std::size_t p, std::size_t n,
             const double* a, const double* b, double* c);
void gemm_tn(std::size_t m, std::size_t p, std::size_t n,
             const double* a, const double* b, double* c);

}  // namespace bwrank::kernels
