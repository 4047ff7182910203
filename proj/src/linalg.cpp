#include "splitfeas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace splitfeas {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw std::invalid_argument("Matrix: data size does not match dimensions");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  Matrix bt = transpose(b);
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      c(i, j) = kernels::dot(a.row(i), bt.row(j), a.cols());
  return c;
}

Matrix gram(const Matrix& a) {
  Matrix at = transpose(a);
  const std::size_t n = a.cols();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double v = kernels::dot(at.row(i), at.row(j), a.rows());
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

Vec matvec(const Matrix& a, const Vec& x) {
  if (x.size() != a.cols()) throw std::invalid_argument("matvec: dimension mismatch");
  Vec y(a.rows());
  kernels::matvec(a.data(), a.rows(), a.cols(), x.data(), y.data());
  return y;
}

Vec matvec_t(const Matrix& a, const Vec& y) {
  if (y.size() != a.rows()) throw std::invalid_argument("matvec_t: dimension mismatch");
  Vec x(a.cols());
  kernels::matvec_t(a.data(), a.rows(), a.cols(), y.data(), x.data());
  return x;
}

bool is_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (a(i, j) != a(j, i)) return false;
  return true;
}

double frobenius_norm(const Matrix& a) {
  return std::sqrt(kernels::norm_sq(a.data(), a.rows() * a.cols()));
}

double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  return kernels::dot(x.data(), y.data(), x.size());
}

double norm(const Vec& x) { return std::sqrt(kernels::norm_sq(x.data(), x.size())); }

double norm_sq(const Vec& x) { return kernels::norm_sq(x.data(), x.size()); }

double dist(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dist: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = x[i] - y[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Vec add(const Vec& x, const Vec& y) { return add_scaled(x, 1.0, y); }

Vec sub(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("sub: dimension mismatch");
  Vec out(x.size());
  kernels::sub(x.data(), y.data(), out.data(), x.size());
  return out;
}

Vec scaled(const Vec& x, double a) {
  Vec out = x;
  kernels::scal(a, out.data(), out.size());
  return out;
}

Vec add_scaled(const Vec& x, double a, const Vec& d) {
  if (x.size() != d.size()) throw std::invalid_argument("add_scaled: dimension mismatch");
  Vec out(x.size());
  kernels::add_scaled(x.data(), a, d.data(), out.data(), x.size());
  return out;
}

SymEig sym_eig(const Matrix& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("sym_eig: matrix not square");
  const std::size_t n = s.rows();
  Matrix a = s;
  Matrix v = Matrix::identity(n);

  auto off_norm_sq = [&]() {
    double acc = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) acc += 2.0 * a(p, q) * a(p, q);
    return acc;
  };

  const double total = frobenius_norm(a);
  const double stop = (total == 0.0) ? 0.0 : 1e-30 * total * total;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm_sq() <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double app = a(p, p), aqq = a(q, q);
        // skip rotations that cannot change anything at double precision
        if (std::abs(apq) <= 1e-300 ||
            std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          continue;
        }
        double theta = (aqq - app) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
  Matrix g = random_matrix(n, n, rng);
  // Columns orthonormalized by modified Gram-Schmidt, two passes.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += g(i, k) * g(i, j);
        for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
      }
      double nrm = 0.0;
      for (std::size_t i = 0; i < n; ++i) nrm += g(i, j) * g(i, j);
      nrm = std::sqrt(nrm);
      if (nrm < 1e-12) throw std::runtime_error("random_orthogonal: degenerate draw");
      for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
    }
  }
  return g;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  return m;
}

Vec random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (auto& x : v) x = gauss(rng);
  return v;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace splitfeas
