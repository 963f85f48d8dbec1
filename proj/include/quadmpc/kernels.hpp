#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace quadmpc::kern {

// Dense double-precision vector/matrix kernels backing the QP solver's inner
// loops. Matrices are row-major, unit stride. Each backend implements the
// same table; the active one is picked from CPU features at startup and can
// be overridden with set_backend() or the QUADMPC_KERNEL environment
// variable (values: scalar, avx2, neon).
//
// Backends may reduce in different association orders, so results agree with
// the scalar reference to rounding, not bitwise. A fixed backend is fully
// deterministic.
struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = A x, A is rows x cols
  void (*matvec)(const double* a, std::size_t rows, std::size_t cols,
                 const double* x, double* y);
  // y = A^T x
  void (*matvec_t)(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y);
  // out_i = min(max(x_i, lo_i), hi_i)
  void (*clamp)(const double* x, const double* lo, const double* hi,
                double* out, std::size_t n);
  double (*norm_inf)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(__x86_64__)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

const KernelTable& active();
bool set_backend(const std::string& name);
std::vector<std::string> available_backends();

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
inline void matvec(const double* a, std::size_t rows, std::size_t cols,
                   const double* x, double* y) {
  active().matvec(a, rows, cols, x, y);
}
inline void matvec_t(const double* a, std::size_t rows, std::size_t cols,
                     const double* x, double* y) {
  active().matvec_t(a, rows, cols, x, y);
}
inline void clamp(const double* x, const double* lo, const double* hi,
                  double* out, std::size_t n) {
  active().clamp(x, lo, hi, out, n);
}
inline double norm_inf(const double* x, std::size_t n) {
  return active().norm_inf(x, n);
}

}  // namespace quadmpc::kern
