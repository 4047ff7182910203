#include "splitfeas/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace splitfeas::kernels {

namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  double (*norm_sq)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*add_scaled)(const double*, double, const double*, double*, std::size_t);
  void (*sub)(const double*, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*matvec_t)(const double*, std::size_t, std::size_t, const double*, double*);
};

constexpr Table kScalar{Isa::scalar,
                        scalar::dot,    scalar::norm_sq, scalar::axpy,
                        scalar::add_scaled, scalar::sub, scalar::scal,
                        scalar::matvec, scalar::matvec_t};

#if defined(SPLITFEAS_HAVE_AVX2)
constexpr Table kAvx2{Isa::avx2,
                      avx2::dot,    avx2::norm_sq, avx2::axpy,
                      avx2::add_scaled, avx2::sub, avx2::scal,
                      avx2::matvec, avx2::matvec_t};
#endif

Table resolve() {
  const char* force = std::getenv("SPLITFEAS_KERNELS");
  if (force != nullptr && std::strcmp(force, "scalar") == 0) return kScalar;
#if defined(SPLITFEAS_HAVE_AVX2)
  if (force != nullptr && std::strcmp(force, "avx2") == 0) return kAvx2;
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return kAvx2;
#endif
  return kScalar;
}

const Table& table() {
  static const Table t = resolve();
  return t;
}

}  // namespace

Isa active_isa() { return table().isa; }

const char* isa_name() { return table().isa == Isa::avx2 ? "avx2" : "scalar"; }

double dot(const double* x, const double* v, std::size_t n) { return table().dot(x, v, n); }
double norm_sq(const double* x, std::size_t n) { return table().norm_sq(x, n); }
void axpy(double a, const double* x, double* y, std::size_t n) { table().axpy(a, x, y, n); }
void add_scaled(const double* x, double a, const double* d, double* out, std::size_t n) {
  table().add_scaled(x, a, d, out, n);
}
void sub(const double* x, const double* v, double* out, std::size_t n) { table().sub(x, v, out, n); }
void scal(double a, double* x, std::size_t n) { table().scal(a, x, n); }
void matvec(const double* a, std::size_t m, std::size_t n, const double* x, double* y) {
  table().matvec(a, m, n, x, y);
}
void matvec_t(const double* a, std::size_t m, std::size_t n, const double* y, double* x) {
  table().matvec_t(a, m, n, y, x);
}

}  // namespace splitfeas::kernels
