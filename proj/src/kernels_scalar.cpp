#include "c2aug/kernels.hpp"

namespace c2aug::kern {
namespace {

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_scal(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void s_vadd(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void s_vsub(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void s_vmul(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double s_vsum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double s_vmax(const double* a, std::size_t n) {
  double m = a[0];
  for (std::size_t i = 1; i < n; ++i)
    if (a[i] > m) m = a[i];
  return m;
}

void s_gemm_nn(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a[i * k + p];
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void s_gemm_nt(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c[i * n + j] += s_dot(a + i * k, b + j * k, k);
}

void s_gemm_tn(const double* a, const double* b, double* c, std::size_t m,
               std::size_t k, std::size_t n) {
  // a is k x m, b is k x n
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const double api = arow[i];
      double* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += api * brow[j];
    }
  }
}

void s_gemv_n(const double* a, const double* x, double* y, std::size_t m,
              std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) y[i] += s_dot(a + i * n, x, n);
}

void s_gemv_t(const double* a, const double* x, double* y, std::size_t m,
              std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) s_axpy(x[i], a + i * n, y, n);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k = {
      "scalar", s_dot,     s_axpy,    s_scal,    s_vadd,   s_vsub,
      s_vmul,   s_vsum,    s_vmax,    s_gemm_nn, s_gemm_nt, s_gemm_tn,
      s_gemv_n, s_gemv_t,
  };
  return k;
}

}  // namespace c2aug::kern
