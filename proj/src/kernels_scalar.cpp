#include "splitfeas/kernels.hpp"

namespace splitfeas::kernels::scalar {

double dot(const double* x, const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * v[i];
  return acc;
}

double norm_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void add_scaled(const double* x, double a, const double* d, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + a * d[i];
}

void sub(const double* x, const double* v, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] - v[i];
}

void scal(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void matvec(const double* a, std::size_t m, std::size_t n, const double* x, double* y) {
  for (std::size_t i = 0; i < m; ++i) y[i] = dot(a + i * n, x, n);
}

void matvec_t(const double* a, std::size_t m, std::size_t n, const double* y, double* x) {
  for (std::size_t j = 0; j < n; ++j) x[j] = 0.0;
  for (std::size_t i = 0; i < m; ++i) axpy(y[i], a + i * n, x, n);
}

}  // namespace splitfeas::kernels::scalar
