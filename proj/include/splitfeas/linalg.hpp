#ifndef SPLITFEAS_LINALG_HPP
#define SPLITFEAS_LINALG_HPP

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "splitfeas/kernels.hpp"

namespace splitfeas {

using Vec = std::vector<double>;

// Row-major dense matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vec& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix matmul(const Matrix& a, const Matrix& b);
// A^T A with both triangles filled from the same dot products, so the result
// compares equal to its own transpose.
Matrix gram(const Matrix& a);
Vec matvec(const Matrix& a, const Vec& x);
Vec matvec_t(const Matrix& a, const Vec& y);
bool is_symmetric(const Matrix& a);
double frobenius_norm(const Matrix& a);

// Vector helpers on top of the kernel layer.
double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
double norm_sq(const Vec& x);
double dist(const Vec& x, const Vec& y);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scaled(const Vec& x, double a);
// x + a * d
Vec add_scaled(const Vec& x, double a, const Vec& d);

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// values ascending, vectors(:, k) the eigenvector of values[k].
struct SymEig {
  Vec values;
  Matrix vectors;
};
SymEig sym_eig(const Matrix& s);

// Haar-ish random orthogonal matrix (Gram-Schmidt of a Gaussian draw, run
// twice for orthonormality near machine precision).
Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng);

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng);
Vec random_vector(std::size_t n, std::mt19937_64& rng);

// splitmix64 step; used to derive independent per-entry seeds from one suite seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

std::string format_double(double v);  // 17 significant digits

}  // namespace splitfeas

#endif
