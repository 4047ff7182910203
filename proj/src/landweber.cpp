#include "splitfeas/landweber.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitfeas {

namespace {

void require_compatible(const LinearMap& a, const FixedPointOperator& t, const Vec& x) {
  if (t.dim != a.rows())
    throw std::invalid_argument("landweber: operator dimension must match rows of A");
  if (x.size() != a.cols())
    throw std::invalid_argument("landweber: point dimension must match cols of A");
}

}  // namespace

Vec landweber_apply(const LinearMap& a, const FixedPointOperator& t, const Vec& x) {
  require_compatible(a, t, x);
  Vec ax = a.apply(x);
  Vec v = sub(t(ax), ax);
  Vec w = a.apply_adjoint(v);
  return add_scaled(x, 1.0 / (a.op_norm() * a.op_norm()), w);
}

double landweber_fix_tol(const Vec& ax) { return 1e-12 * (1.0 + norm(ax)); }

double tau(const LinearMap& a, const FixedPointOperator& t, const Vec& x) {
  require_compatible(a, t, x);
  Vec ax = a.apply(x);
  Vec v = sub(t(ax), ax);
  double vn = norm(v);
  if (vn <= landweber_fix_tol(ax)) return 1.0;
  double wn = norm(a.apply_adjoint(v));
  if (wn == 0.0) throw std::runtime_error("fixed-set equivalence violated");
  double ratio = a.op_norm() * vn / wn;
  return std::max(1.0, ratio * ratio);
}

Vec extrapolated_apply(const LinearMap& a, const FixedPointOperator& t, SigmaMode mode,
                       const Vec& x, const std::function<double(const Vec&)>& custom_sigma) {
  require_compatible(a, t, x);
  switch (mode) {
    case SigmaMode::one:
      return landweber_apply(a, t, x);
    case SigmaMode::tau: {
      Vec ax = a.apply(x);
      Vec v = sub(t(ax), ax);
      double vn2 = norm_sq(v);
      if (vn2 == 0.0) return x;
      Vec w = a.apply_adjoint(v);
      double wn2 = norm_sq(w);
      if (wn2 == 0.0) throw std::runtime_error("fixed-set equivalence violated");
      return add_scaled(x, vn2 / wn2, w);
    }
    case SigmaMode::custom: {
      if (!custom_sigma)
        throw std::invalid_argument("extrapolated_apply: missing custom sigma");
      double s = custom_sigma(x);
      double bound = tau(a, t, x);
      if (s < 1.0 - 1e-12 || s > bound * (1.0 + 1e-12))
        throw std::invalid_argument("extrapolation exceeds tau");
      Vec lx = landweber_apply(a, t, x);
      return add_scaled(x, s, sub(lx, x));
    }
  }
  throw std::logic_error("extrapolated_apply: unknown mode");
}

FixedPointOperator make_landweber_operator(std::shared_ptr<const LinearMap> a,
                                           FixedPointOperator t, LandweberOptions opts,
                                           const Vec& witness,
                                           std::function<double(const Vec&)> fix_distance,
                                           FixOracleKind fix_kind) {
  if (!a) throw std::invalid_argument("make_landweber_operator: null map");
  if (t.dim != a->rows())
    throw std::invalid_argument("make_landweber_operator: dimension mismatch");
  if (!(opts.lambda > 0.0) || opts.lambda > 2.0)
    throw std::invalid_argument("make_landweber_operator: lambda outside (0, 2]");
  Vec aw = a->apply(witness);
  if (!t.fix_membership(aw, 1e-8 * (1.0 + norm(aw))))
    throw std::invalid_argument("make_landweber_operator: witness image is not fixed by T");

  auto inner = std::make_shared<FixedPointOperator>(std::move(t));
  const double lambda = opts.lambda;
  const SigmaMode mode = opts.sigma;

  FixedPointOperator out;
  out.dim = a->cols();
  if (inner->sqne_rho) {
    if (lambda <= 1.0) {
      out.sqne_rho = *inner->sqne_rho;  // transform and (0,1]-relaxation both carry rho
    } else if (*inner->sqne_rho >= 1.0) {
      out.sqne_rho = (2.0 - lambda) / lambda;  // cutter relaxed into (1, 2]
    }
  }
  out.evaluate = [a, inner, mode, lambda](const Vec& x) {
    if (lambda == 1.0) return extrapolated_apply(*a, *inner, mode, x);
    Vec lx = extrapolated_apply(*a, *inner, mode, x);
    return add_scaled(x, lambda, sub(lx, x));
  };
  if (fix_distance) {
    out.fix_distance = std::move(fix_distance);
    out.fix_oracle = fix_kind;
  } else if (inner->fix_distance) {
    // d(x, A^{-1}(Fix T)) sandwiched through the image-side oracle
    auto image_dist = inner->fix_distance;
    double min_sv = a->min_pos_sv();
    out.fix_distance = [a, image_dist, min_sv](const Vec& x) {
      return image_dist(a->apply(x)) / min_sv;  // upper half of the sandwich
    };
    out.fix_oracle = FixOracleKind::by_iteration;
  }
  return out;
}

double relaxation_identity_dev(const LinearMap& a, const FixedPointOperator& t, double lambda,
                               std::span<const Vec> points) {
  FixedPointOperator relaxed = relax(t, lambda);
  double dev = 0.0;
  for (const Vec& x : points) {
    Vec lhs = landweber_apply(a, relaxed, x);               // L{T_lambda}
    Vec base = landweber_apply(a, t, x);                    // (L{T})_lambda
    Vec rhs = add_scaled(x, lambda, sub(base, x));
    dev = std::max(dev, dist(lhs, rhs));
  }
  return dev;
}

double combination_identity_dev(const LinearMap& a, const std::vector<double>& weights,
                                const std::vector<FixedPointOperator>& ts,
                                std::span<const Vec> points) {
  std::vector<FixedPointOperator> copy = ts;
  FixedPointOperator mixed = convex_combination(weights, std::move(copy));
  double dev = 0.0;
  for (const Vec& x : points) {
    Vec lhs = landweber_apply(a, mixed, x);  // L{sum w_i T_i}
    Vec rhs(x.size(), 0.0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      Vec li = landweber_apply(a, ts[i], x);
      kernels::axpy(weights[i], li.data(), rhs.data(), rhs.size());
    }
    dev = std::max(dev, dist(lhs, rhs));
  }
  return dev;
}

double product_identity_dev(const LinearMap& a_orthogonal,
                            const std::vector<FixedPointOperator>& ts,
                            std::span<const Vec> points) {
  if (ts.empty()) throw std::invalid_argument("product_identity_dev: no operators");
  double dev = 0.0;
  for (const Vec& x : points) {
    // L{T_m ... T_1}
    Vec ax = a_orthogonal.apply(x);
    Vec y = ax;
    for (const auto& t : ts) y = t(y);
    Vec v = sub(y, ax);
    Vec lhs = add_scaled(
        x, 1.0 / (a_orthogonal.op_norm() * a_orthogonal.op_norm()),
        a_orthogonal.apply_adjoint(v));
    // L{T_m} ... L{T_1}
    Vec rhs = x;
    for (const auto& t : ts) rhs = landweber_apply(a_orthogonal, t, rhs);
    dev = std::max(dev, dist(lhs, rhs));
  }
  return dev;
}

double TransformIdentityReport::max_dev() const {
  return std::max({dev_relaxation, dev_combination, dev_product});
}

TransformIdentityReport transform_identity_suite(const LinearMap& a,
                                                 const LinearMap& a_orthogonal,
                                                 const std::vector<FixedPointOperator>& ts,
                                                 const std::vector<FixedPointOperator>& ortho_ts,
                                                 const std::vector<double>& weights,
                                                 double lambda, std::span<const Vec> points,
                                                 std::span<const Vec> ortho_points) {
  TransformIdentityReport rep;
  for (const auto& t : ts)
    rep.dev_relaxation =
        std::max(rep.dev_relaxation, relaxation_identity_dev(a, t, lambda, points));
  rep.dev_combination = combination_identity_dev(a, weights, ts, points);
  rep.dev_product = product_identity_dev(a_orthogonal, ortho_ts, ortho_points);
  return rep;
}

SandwichResult sandwich_check(const LinearMap& a,
                              const std::function<double(const Vec&)>& dist_fix_landweber,
                              const std::function<double(const Vec&)>& dist_image_target,
                              const Vec& x, double tol) {
  if (!dist_fix_landweber || !dist_image_target)
    throw std::invalid_argument("sandwich_check: missing distance oracle");
  if (x.size() != a.cols()) throw std::invalid_argument("sandwich_check: dimension mismatch");
  Vec ax = a.apply(x);
  double d_image = dist_image_target(ax);
  SandwichResult res;
  res.lower = d_image / a.op_norm();
  res.mid = dist_fix_landweber(x);
  res.upper = d_image / a.min_pos_sv();
  if (res.lower > res.mid + tol || res.mid > res.upper + tol)
    throw std::runtime_error("sandwich_check: distance chain violated");
  return res;
}

ResidualBoundResult residual_bound_check(const LinearMap& a, const FixedPointOperator& t,
                                         const std::function<double(const Vec&)>& dist_fix_landweber,
                                         const Vec& x, double tol) {
  if (!dist_fix_landweber)
    throw std::invalid_argument("residual_bound_check: missing distance oracle");
  if (!t.sqne_rho) throw std::invalid_argument("residual_bound_check: operator carries no rho");
  require_compatible(a, t, x);
  Vec ax = a.apply(x);
  Vec v = sub(t(ax), ax);
  Vec lx = landweber_apply(a, t, x);
  ResidualBoundResult res;
  res.lhs = norm_sq(v);
  res.rhs = 2.0 * a.op_norm() * a.op_norm() / (*t.sqne_rho + 1.0) * dist(lx, x) *
            dist_fix_landweber(x);
  if (res.lhs > res.rhs + tol)
    throw std::runtime_error("residual_bound_check: bound violated");
  return res;
}

}  // namespace splitfeas
