#ifndef SPLITFEAS_KERNELS_HPP
#define SPLITFEAS_KERNELS_HPP

#include <cstddef>

// Dense double-precision primitives behind everything else in the library.
// Each primitive has a scalar reference implementation and, on x86-64, an
// AVX2 variant; the active set is picked once at startup from CPUID and can
// be forced with SPLITFEAS_KERNELS=scalar|avx2 in the environment.

namespace splitfeas::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name();

// y = <x, v>
double dot(const double* x, const double* v, std::size_t n);
// <x, x>
double norm_sq(const double* x, std::size_t n);
// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);
// out = x + a * d
void add_scaled(const double* x, double a, const double* d, double* out, std::size_t n);
// out = x - v
void sub(const double* x, const double* v, double* out, std::size_t n);
// x *= a
void scal(double a, double* x, std::size_t n);
// y = A x, A row-major m x n
void matvec(const double* a, std::size_t m, std::size_t n, const double* x, double* y);
// x = A^T y, A row-major m x n
void matvec_t(const double* a, std::size_t m, std::size_t n, const double* y, double* x);

// Reference implementations, always available; the dispatched entry points
// above are equivalence-tested against these.
namespace scalar {
double dot(const double* x, const double* v, std::size_t n);
double norm_sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void add_scaled(const double* x, double a, const double* d, double* out, std::size_t n);
void sub(const double* x, const double* v, double* out, std::size_t n);
void scal(double a, double* x, std::size_t n);
void matvec(const double* a, std::size_t m, std::size_t n, const double* x, double* y);
void matvec_t(const double* a, std::size_t m, std::size_t n, const double* y, double* x);
}  // namespace scalar

#if defined(SPLITFEAS_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* v, std::size_t n);
double norm_sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void add_scaled(const double* x, double a, const double* d, double* out, std::size_t n);
void sub(const double* x, const double* v, double* out, std::size_t n);
void scal(double a, double* x, std::size_t n);
void matvec(const double* a, std::size_t m, std::size_t n, const double* x, double* y);
void matvec_t(const double* a, std::size_t m, std::size_t n, const double* y, double* x);
}  // namespace avx2
#endif

}  // namespace splitfeas::kernels

#endif
