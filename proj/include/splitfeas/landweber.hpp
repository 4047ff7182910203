#ifndef SPLITFEAS_LANDWEBER_HPP
#define SPLITFEAS_LANDWEBER_HPP

#include <functional>
#include <memory>
#include <span>

#include "splitfeas/fixops.hpp"
#include "splitfeas/linop.hpp"

namespace splitfeas {

// x + A^T(T(Ax) - Ax) / ||A||^2, the pullback of T through A.
Vec landweber_apply(const LinearMap& a, const FixedPointOperator& t, const Vec& x);

// Residual threshold deciding "Ax fixed by T"; relative so the decision does
// not blow up the tau quotient near the fixed set.
double landweber_fix_tol(const Vec& ax);

// (||A|| ||T(Ax)-Ax|| / ||A^T(T(Ax)-Ax)||)^2, clamped to >= 1; equals 1 when
// Ax is fixed by T.  Throws "fixed-set equivalence violated" when the
// adjoint annihilates a nonzero residual, which cannot happen while
// im A meets Fix T.
double tau(const LinearMap& a, const FixedPointOperator& t, const Vec& x);

enum class SigmaMode { one, tau, custom };

// x + sigma(x) (L{T}x - x).  With sigma == tau the step is evaluated in the
// norm-free form x + (||v||^2/||A^T v||^2) A^T v, which does not involve
// ||A|| and is invariant under rescaling A.
Vec extrapolated_apply(const LinearMap& a, const FixedPointOperator& t, SigmaMode mode,
                       const Vec& x,
                       const std::function<double(const Vec&)>& custom_sigma = {});

// FixedPointOperator facade over L_{lambda sigma}{T}.  The witness w (with
// Aw fixed by T) certifies im A and Fix T meet, which is what carries the
// SQNE constant through the transform.
struct LandweberOptions {
  SigmaMode sigma = SigmaMode::one;
  double lambda = 1.0;
};
FixedPointOperator make_landweber_operator(std::shared_ptr<const LinearMap> a,
                                           FixedPointOperator t, LandweberOptions opts,
                                           const Vec& witness,
                                           std::function<double(const Vec&)> fix_distance = {},
                                           FixOracleKind fix_kind = FixOracleKind::exact);

// Deviations between the two evaluation routes of each transform identity.
double relaxation_identity_dev(const LinearMap& a, const FixedPointOperator& t, double lambda,
                               std::span<const Vec> points);
double combination_identity_dev(const LinearMap& a, const std::vector<double>& weights,
                                const std::vector<FixedPointOperator>& ts,
                                std::span<const Vec> points);
// Requires A^T A = Id.
double product_identity_dev(const LinearMap& a_orthogonal,
                            const std::vector<FixedPointOperator>& ts,
                            std::span<const Vec> points);

struct TransformIdentityReport {
  double dev_relaxation = 0.0;
  double dev_combination = 0.0;
  double dev_product = 0.0;
  double max_dev() const;
};
TransformIdentityReport transform_identity_suite(const LinearMap& a,
                                                 const LinearMap& a_orthogonal,
                                                 const std::vector<FixedPointOperator>& ts,
                                                 const std::vector<FixedPointOperator>& ortho_ts,
                                                 const std::vector<double>& weights,
                                                 double lambda, std::span<const Vec> points,
                                                 std::span<const Vec> ortho_points);

// d(Ax, im A n Fix T)/||A|| <= d(x, Fix L{T}) <= d(Ax, im A n Fix T)/|A|.
struct SandwichResult {
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;
};
SandwichResult sandwich_check(const LinearMap& a,
                              const std::function<double(const Vec&)>& dist_fix_landweber,
                              const std::function<double(const Vec&)>& dist_image_target,
                              const Vec& x, double tol = 1e-8);

// ||T(Ax)-Ax||^2 <= 2||A||^2/(rho+1) ||L{T}x-x|| d(x, Fix L{T}).
struct ResidualBoundResult {
  double lhs = 0.0;
  double rhs = 0.0;
};
ResidualBoundResult residual_bound_check(const LinearMap& a, const FixedPointOperator& t,
                                         const std::function<double(const Vec&)>& dist_fix_landweber,
                                         const Vec& x, double tol = 1e-8);

}  // namespace splitfeas

#endif
