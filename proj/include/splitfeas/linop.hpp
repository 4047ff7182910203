#ifndef SPLITFEAS_LINOP_HPP
#define SPLITFEAS_LINOP_HPP

#include <utility>

#include "splitfeas/linalg.hpp"

namespace splitfeas {

// Dense bounded linear map A : R^n -> R^m together with its spectral
// constants: the operator norm ||A|| (largest singular value) and |A|, the
// smallest singular value above rank_tol * ||A||.  |A| is positive exactly
// when it is computed over the positive part of the spectrum, which in
// finite dimension always exists for a nonzero map.
class LinearMap {
 public:
  static constexpr double kDefaultRankTol = 1e-10;

  explicit LinearMap(Matrix entries, double rank_tol = kDefaultRankTol);

  std::size_t rows() const { return entries_.rows(); }
  std::size_t cols() const { return entries_.cols(); }
  const Matrix& entries() const { return entries_; }
  double op_norm() const { return op_norm_; }
  double min_pos_sv() const { return min_pos_sv_; }
  double rank_tol() const { return rank_tol_; }
  std::size_t rank() const { return sigma_.size(); }

  // Positive part of the singular system, descending.
  const Vec& singular_values() const { return sigma_; }
  const Matrix& left_basis() const { return left_basis_; }    // m x r
  const Matrix& right_basis() const { return right_basis_; }  // n x r

  Vec apply(const Vec& x) const;          // A x
  Vec apply_adjoint(const Vec& y) const;  // A^T y

  // x = x_ker + x_perp with x_ker in ker A and x_perp in (ker A)^T.
  std::pair<Vec, Vec> kernel_decompose(const Vec& x) const;

  Vec project_range(const Vec& y) const;   // orthogonal projection onto im A
  Vec solve_min_norm(const Vec& y) const;  // pseudoinverse apply

 private:
  Matrix entries_;
  double rank_tol_;
  double op_norm_ = 0.0;
  double min_pos_sv_ = 0.0;
  Vec sigma_;
  Matrix left_basis_;
  Matrix right_basis_;
};

// (op_norm, min_pos_sv) of an arbitrary matrix.  Exactly symmetric input is
// decomposed directly (singular values are the absolute eigenvalues), which
// avoids squaring the condition number through the Gram matrix.
std::pair<double, double> spectral_constants(const Matrix& entries,
                                             double rank_tol = LinearMap::kDefaultRankTol);

// The four routes to the same constant: |A|, |A^T|, sqrt|AA^T|, sqrt|A^TA|,
// each computed independently, plus their largest pairwise relative spread.
struct ClosedRangeReport {
  double a;
  double a_star;
  double sqrt_aat;
  double sqrt_ata;
  double max_rel_dev;
};
ClosedRangeReport closed_range_identity_check(const LinearMap& map);

}  // namespace splitfeas

#endif
