#pragma once

#include <cstddef>

namespace bwrank::kernels::detail {

struct OpsTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*add_scaled)(const double*, double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  void (*rot)(double, double, double*, double*, std::size_t);
  void (*gemm_nn)(std::size_t, std::size_t, std::size_t, const double*, const double*, double*);
  void (*gemm_nt)(std::size_t, std::size_t, std::size_t, const double*, const double*, double*);
  void (*gemm_tn)(std::size_t, std::size_t, std::size_t, const double*, const double*, double*);
};

// Defined in kernels_avx2.cpp; null on non-x86 builds.
const OpsTable* avx2_table();
bool cpu_supports_avx2();

}  // namespace bwrank::kernels::detail
