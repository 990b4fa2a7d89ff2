#pragma once

#include <cstddef>

// Low-level dense kernels. Every entry point has a scalar reference
// implementation; on x86-64 with AVX2+FMA an accelerated variant is selected
// once at startup. The two variants are equivalence-tested against each other.
//
// All matrices are row-major. The gemm/gemv kernels accumulate into the
// output (C += ..., y += ...); callers zero the buffer when they want a plain
// product.

namespace c2aug::kern {

struct Kernels {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x *= alpha
  void (*scal)(double alpha, double* x, std::size_t n);
  void (*vadd)(const double* a, const double* b, double* out, std::size_t n);
  void (*vsub)(const double* a, const double* b, double* out, std::size_t n);
  void (*vmul)(const double* a, const double* b, double* out, std::size_t n);
  double (*vsum)(const double* a, std::size_t n);
  double (*vmax)(const double* a, std::size_t n);

  // C[m x n] += A[m x k] * B[k x n]
  void (*gemm_nn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
  // C[m x n] += A[m x k] * B[n x k]^T
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
  // C[m x n] += A[k x m]^T * B[k x n]
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
  // y[m] += A[m x n] * x[n]
  void (*gemv_n)(const double* a, const double* x, double* y, std::size_t m,
                 std::size_t n);
  // y[n] += A[m x n]^T * x[m]
  void (*gemv_t)(const double* a, const double* x, double* y, std::size_t m,
                 std::size_t n);
};

// Backend selected at startup: AVX2 when the CPU supports AVX2+FMA, scalar
// otherwise. Overridable with C2AUG_KERNELS=scalar|avx2 or force_backend().
const Kernels& active();

const Kernels& scalar_kernels();

// nullptr when the build or the CPU lacks AVX2 support.
const Kernels* avx2_kernels();

// Test hook. Throws if the named backend is unavailable.
void force_backend(const char* name);

}  // namespace c2aug::kern
