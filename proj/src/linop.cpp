#include "splitfeas/linop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitfeas {

namespace {

struct ThinSvd {
  Vec sigma;     // descending, above threshold
  Matrix left;   // m x r
  Matrix right;  // n x r
};

// Eigendecompose the smaller Gram matrix and push the basis through A.
ThinSvd thin_svd(const Matrix& a, double rank_tol) {
  const std::size_t m = a.rows(), n = a.cols();
  const bool via_cols = m >= n;  // A^T A when tall, A A^T when wide
  Matrix g = via_cols ? gram(a) : gram(transpose(a));
  SymEig eig = sym_eig(g);

  const std::size_t k = g.rows();
  Vec sv(k);
  for (std::size_t i = 0; i < k; ++i) sv[i] = std::sqrt(std::max(eig.values[i], 0.0));
  const double top = sv.back();  // ascending order
  if (top <= 0.0) throw std::invalid_argument("zero operator");
  const double threshold = rank_tol * top;

  ThinSvd out;
  std::vector<std::size_t> keep;
  for (std::size_t i = k; i-- > 0;)
    if (sv[i] > threshold) keep.push_back(i);  // descending sigma
  if (keep.empty()) throw std::invalid_argument("zero operator");

  const std::size_t r = keep.size();
  out.sigma.resize(r);
  out.left = Matrix(m, r);
  out.right = Matrix(n, r);
  for (std::size_t c = 0; c < r; ++c) {
    const std::size_t idx = keep[c];
    out.sigma[c] = sv[idx];
    Vec basis(k);
    for (std::size_t i = 0; i < k; ++i) basis[i] = eig.vectors(i, idx);
    if (via_cols) {
      Vec u = matvec(a, basis);
      double nu = norm(u);
      for (std::size_t i = 0; i < n; ++i) out.right(i, c) = basis[i];
      for (std::size_t i = 0; i < m; ++i) out.left(i, c) = u[i] / nu;
    } else {
      Vec v = matvec_t(a, basis);
      double nv = norm(v);
      for (std::size_t i = 0; i < m; ++i) out.left(i, c) = basis[i];
      for (std::size_t i = 0; i < n; ++i) out.right(i, c) = v[i] / nv;
    }
  }
  return out;
}

Vec basis_project(const Matrix& basis, const Vec& x) {
  // basis (d x r) has orthonormal columns; returns basis basis^T x
  Vec coeff = matvec_t(basis, x);
  return matvec(basis, coeff);
}

}  // namespace

LinearMap::LinearMap(Matrix entries, double rank_tol)
    : entries_(std::move(entries)), rank_tol_(rank_tol) {
  if (entries_.rows() == 0 || entries_.cols() == 0)
    throw std::invalid_argument("LinearMap: empty matrix");
  if (!(rank_tol > 0.0)) throw std::invalid_argument("LinearMap: rank_tol must be positive");
  ThinSvd svd = thin_svd(entries_, rank_tol_);
  sigma_ = std::move(svd.sigma);
  left_basis_ = std::move(svd.left);
  right_basis_ = std::move(svd.right);
  op_norm_ = sigma_.front();
  min_pos_sv_ = sigma_.back();
}

Vec LinearMap::apply(const Vec& x) const {
  if (x.size() != cols()) throw std::invalid_argument("LinearMap::apply: dimension mismatch");
  return matvec(entries_, x);
}

Vec LinearMap::apply_adjoint(const Vec& y) const {
  if (y.size() != rows())
    throw std::invalid_argument("LinearMap::apply_adjoint: dimension mismatch");
  return matvec_t(entries_, y);
}

std::pair<Vec, Vec> LinearMap::kernel_decompose(const Vec& x) const {
  if (x.size() != cols())
    throw std::invalid_argument("LinearMap::kernel_decompose: dimension mismatch");
  Vec perp = basis_project(right_basis_, x);
  Vec ker = sub(x, perp);
  return {ker, perp};
}

Vec LinearMap::project_range(const Vec& y) const {
  if (y.size() != rows())
    throw std::invalid_argument("LinearMap::project_range: dimension mismatch");
  return basis_project(left_basis_, y);
}

Vec LinearMap::solve_min_norm(const Vec& y) const {
  if (y.size() != rows())
    throw std::invalid_argument("LinearMap::solve_min_norm: dimension mismatch");
  Vec coeff = matvec_t(left_basis_, y);
  for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] /= sigma_[i];
  return matvec(right_basis_, coeff);
}

std::pair<double, double> spectral_constants(const Matrix& entries, double rank_tol) {
  if (!(rank_tol > 0.0))
    throw std::invalid_argument("spectral_constants: rank_tol must be positive");
  if (is_symmetric(entries)) {
    SymEig eig = sym_eig(entries);
    double top = 0.0;
    for (double v : eig.values) top = std::max(top, std::abs(v));
    if (top <= 0.0) throw std::invalid_argument("zero operator");
    const double threshold = rank_tol * top;
    double smallest = top;
    for (double v : eig.values) {
      double s = std::abs(v);
      if (s > threshold) smallest = std::min(smallest, s);
    }
    return {top, smallest};
  }
  ThinSvd svd = thin_svd(entries, rank_tol);
  return {svd.sigma.front(), svd.sigma.back()};
}

ClosedRangeReport closed_range_identity_check(const LinearMap& map) {
  const Matrix& a = map.entries();
  Matrix at = transpose(a);
  ClosedRangeReport rep{};
  rep.a = map.min_pos_sv();
  rep.a_star = spectral_constants(at, map.rank_tol()).second;
  rep.sqrt_aat = std::sqrt(spectral_constants(matmul(a, at), map.rank_tol()).second);
  rep.sqrt_ata = std::sqrt(spectral_constants(matmul(at, a), map.rank_tol()).second);

  const double vals[4] = {rep.a, rep.a_star, rep.sqrt_aat, rep.sqrt_ata};
  double hi = 0.0;
  for (double v : vals) hi = std::max(hi, std::abs(v));
  double dev = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) dev = std::max(dev, std::abs(vals[i] - vals[j]));
  rep.max_rel_dev = (hi == 0.0) ? 0.0 : dev / hi;
  return rep;
}

}  // namespace splitfeas
