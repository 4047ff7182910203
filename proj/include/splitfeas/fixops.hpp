#ifndef SPLITFEAS_FIXOPS_HPP
#define SPLITFEAS_FIXOPS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "splitfeas/linop.hpp"

namespace splitfeas {

enum class FixOracleKind { exact, by_iteration, lower_bound };

// Evaluable self-map of R^dim carrying its SQNE constant rho (nullopt when
// no constant is certified) and an oracle for the distance to its fixed set.
struct FixedPointOperator {
  std::size_t dim = 0;
  std::optional<double> sqne_rho;
  std::function<Vec(const Vec&)> evaluate;
  std::function<double(const Vec&)> fix_distance;  // may be empty
  FixOracleKind fix_oracle = FixOracleKind::exact;

  Vec operator()(const Vec& x) const;
  // ||T x - x|| <= tol
  bool fix_membership(const Vec& x, double tol) const;
};

FixedPointOperator identity_operator(std::size_t dim);

// Convex function given by a value oracle and one deterministic selection
// from its subdifferential.  slater_point (a point with negative value) and
// subgrad_bound (radius -> bound on ||subgradient|| over that ball around the
// Slater point) feed the regularity estimates.  exact_sublevel_project, when
// present, is a trusted projector onto {f <= 0}.
struct ConvexFunction {
  std::size_t dim = 0;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> subgradient;
  double strong_convexity = 0.0;
  std::optional<Vec> slater_point;
  std::function<double(double)> subgrad_bound;
  std::function<Vec(const Vec&)> exact_sublevel_project;
};

// f(x) = <a,x> - b
ConvexFunction affine_function(Vec a, double b);
// f(x) = max_i (<a_i,x> - b_i)
ConvexFunction max_affine_function(std::vector<Vec> normals, Vec offsets);
// f(x) = ||x - center||^2 - radius^2
ConvexFunction ball_function(Vec center, double radius);
// f(x) = max_i |x_i| - level
ConvexFunction sup_norm_function(std::size_t dim, double level);
// f(x) = ||A x - center||^2 - radius^2 (the pullback of ball_function by A)
ConvexFunction preimage_ball_function(std::shared_ptr<const LinearMap> a, Vec center,
                                      double radius);

struct Halfspace {
  Vec normal;
  double offset;  // {x : <normal,x> <= offset}
};
struct Ball {
  Vec center;
  double radius;
};
struct Box {
  Vec lo;
  Vec hi;
};
struct AffineSet {
  Matrix m;
  Vec d;  // {x : M x = d}, consistent
};
struct Sublevel {
  ConvexFunction f;  // {x : f(x) <= 0}
};

// Closed convex set with an exact Euclidean projection.  Sublevel sets use
// the function's exact projector when present and otherwise fall back to an
// iterative solve (see sublevel_project_iterative).
class ConvexSetSpec {
 public:
  using Payload = std::variant<Halfspace, Ball, Box, AffineSet, Sublevel>;

  explicit ConvexSetSpec(Halfspace h);
  explicit ConvexSetSpec(Ball b);
  explicit ConvexSetSpec(Box b);
  explicit ConvexSetSpec(AffineSet a);
  explicit ConvexSetSpec(Sublevel s);

  std::size_t dim() const { return dim_; }
  const Payload& payload() const { return set_; }

  Vec project(const Vec& x) const;
  double distance(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-10) const;
  FixOracleKind projection_kind() const;

 private:
  Payload set_;
  std::size_t dim_ = 0;
  std::shared_ptr<const LinearMap> affine_rows_;  // pseudoinverse cache
};

Vec project(const ConvexSetSpec& set, const Vec& x);

// x - (f(x)/||g||^2) g when f(x) > 0, x otherwise.
Vec subgradient_project(const ConvexFunction& f, const Vec& x);

// Cutter facades (rho = 1).
FixedPointOperator projection_operator(ConvexSetSpec set);
FixedPointOperator subgradient_projection_operator(ConvexFunction f);

// x + lambda (T x - x); carries (rho + 1 - lambda)/lambda when lambda is in
// (0, rho + 1].
FixedPointOperator relax(const FixedPointOperator& t, double lambda);
// Generalized alpha(.)-relaxation; no SQNE constant is certified.
FixedPointOperator relax(const FixedPointOperator& t,
                         std::function<double(const Vec&)> alpha);

// U_m ... U_1 with rho = min_i rho_i / m.  The witness certifies that the
// operators share a fixed point; nonemptiness is an assumption, not
// something this function discovers.
FixedPointOperator compose_product(std::vector<FixedPointOperator> ops, const Vec& witness,
                                   double witness_tol = 1e-8);

FixedPointOperator convex_combination(std::vector<double> weights,
                                      std::vector<FixedPointOperator> ops);

// Worst sampled violation of each of the four equivalent SQNE
// characterizations, evaluated over the given points and fixed points.
struct SqneEquivalenceReport {
  double worst_sqne = 0.0;        // definition inequality
  double worst_cutter = 0.0;      // T_((rho+1)/2) cutter inequality
  double worst_inner = 0.0;       // <Tx - x, z - x> >= (rho+1)/2 ||Tx - x||^2
  double worst_relaxed = 0.0;     // generalized-relaxation inequality
  double worst() const;
};
SqneEquivalenceReport check_sqne_equivalences(const FixedPointOperator& t, double rho,
                                              std::span<const Vec> points,
                                              std::span<const Vec> fix_points);

struct DykstraOptions {
  double tol = 1e-11;
  int max_cycles = 100000;
};
// Exact projection onto the intersection of the sets; fails loudly when the
// change norm does not reach tol within the cycle cap.
Vec dykstra_project(std::span<const ConvexSetSpec> sets, const Vec& x,
                    const DykstraOptions& opts = {});

// Closed-form projections onto simple intersections, used as trusted
// distance oracles by the recipes.
Vec project_two_halfspaces(const Halfspace& h1, const Halfspace& h2, const Vec& x);
Vec project_ball_halfspace(const Ball& b, const Halfspace& h, const Vec& x);

// Nearest point of {f <= 0}: bisection on the multiplier of the distance
// Lagrangian with a damped inner fixed-point solve for each multiplier.
Vec sublevel_project_iterative(const ConvexFunction& f, const Vec& x, double tol = 1e-10);

}  // namespace splitfeas

#endif
