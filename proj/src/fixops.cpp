#include "splitfeas/fixops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace splitfeas {

namespace {

void require_dim(const Vec& x, std::size_t dim, const char* what) {
  if (x.size() != dim) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

Vec halfspace_project(const Vec& a, double b, const Vec& x) {
  double t = dot(a, x) - b;
  if (t <= 0.0) return x;
  return add_scaled(x, -t / norm_sq(a), a);
}

double halfspace_distance(const Vec& a, double b, const Vec& x) {
  return std::max(0.0, dot(a, x) - b) / norm(a);
}

}  // namespace

Vec FixedPointOperator::operator()(const Vec& x) const {
  if (!evaluate) throw std::invalid_argument("FixedPointOperator: missing evaluate");
  require_dim(x, dim, "FixedPointOperator");
  return evaluate(x);
}

bool FixedPointOperator::fix_membership(const Vec& x, double tol) const {
  return dist((*this)(x), x) <= tol;
}

FixedPointOperator identity_operator(std::size_t dim) {
  FixedPointOperator op;
  op.dim = dim;
  op.sqne_rho = std::numeric_limits<double>::infinity();
  op.evaluate = [](const Vec& x) { return x; };
  op.fix_distance = [](const Vec&) { return 0.0; };
  op.fix_oracle = FixOracleKind::exact;
  return op;
}

// ---------------------------------------------------------------------------
// Convex function factories

ConvexFunction affine_function(Vec a, double b) {
  if (norm(a) == 0.0) throw std::invalid_argument("affine_function: zero normal");
  ConvexFunction f;
  f.dim = a.size();
  double bound = norm(a);
  f.value = [a, b](const Vec& x) { return dot(a, x) - b; };
  f.subgradient = [a](const Vec&) { return a; };
  f.subgrad_bound = [bound](double) { return bound; };
  f.exact_sublevel_project = [a, b](const Vec& x) { return halfspace_project(a, b, x); };
  return f;
}

ConvexFunction max_affine_function(std::vector<Vec> normals, Vec offsets) {
  if (normals.empty() || normals.size() != offsets.size())
    throw std::invalid_argument("max_affine_function: bad piece count");
  const std::size_t dim = normals.front().size();
  double bound = 0.0;
  for (const Vec& a : normals) {
    if (a.size() != dim) throw std::invalid_argument("max_affine_function: dimension mismatch");
    if (norm(a) == 0.0) throw std::invalid_argument("max_affine_function: zero normal");
    bound = std::max(bound, norm(a));
  }

  ConvexFunction f;
  f.dim = dim;
  auto piece = [normals, offsets](const Vec& x) {
    std::size_t best = 0;
    double best_val = dot(normals[0], x) - offsets[0];
    for (std::size_t i = 1; i < normals.size(); ++i) {
      double v = dot(normals[i], x) - offsets[i];
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    return std::pair<std::size_t, double>(best, best_val);
  };
  f.value = [piece](const Vec& x) { return piece(x).second; };
  f.subgradient = [piece, normals](const Vec& x) { return normals[piece(x).first]; };
  f.subgrad_bound = [bound](double) { return bound; };
  if (normals.size() == 1) {
    Vec a = normals[0];
    double b = offsets[0];
    f.exact_sublevel_project = [a, b](const Vec& x) { return halfspace_project(a, b, x); };
  } else if (normals.size() == 2) {
    Halfspace h1{normals[0], offsets[0]}, h2{normals[1], offsets[1]};
    f.exact_sublevel_project = [h1, h2](const Vec& x) {
      return project_two_halfspaces(h1, h2, x);
    };
  } else {
    std::vector<ConvexSetSpec> sets;
    for (std::size_t i = 0; i < normals.size(); ++i)
      sets.emplace_back(Halfspace{normals[i], offsets[i]});
    f.exact_sublevel_project = [sets](const Vec& x) {
      return dykstra_project(sets, x, DykstraOptions{1e-12, 100000});
    };
  }
  return f;
}

ConvexFunction ball_function(Vec center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_function: radius must be positive");
  ConvexFunction f;
  f.dim = center.size();
  f.value = [center, radius](const Vec& x) {
    Vec d = sub(x, center);
    return norm_sq(d) - radius * radius;
  };
  f.subgradient = [center](const Vec& x) { return scaled(sub(x, center), 2.0); };
  f.strong_convexity = 2.0;
  f.slater_point = center;
  f.subgrad_bound = [](double r) { return 2.0 * r; };
  f.exact_sublevel_project = [center, radius](const Vec& x) {
    Vec d = sub(x, center);
    double nd = norm(d);
    if (nd <= radius) return x;
    return add_scaled(center, radius / nd, d);
  };
  return f;
}

ConvexFunction sup_norm_function(std::size_t dim, double level) {
  if (!(level > 0.0)) throw std::invalid_argument("sup_norm_function: level must be positive");
  ConvexFunction f;
  f.dim = dim;
  f.value = [level](const Vec& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m - level;
  };
  f.subgradient = [](const Vec& x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (std::abs(x[i]) > std::abs(x[best])) best = i;
    Vec g(x.size(), 0.0);
    g[best] = x[best] >= 0.0 ? 1.0 : -1.0;
    return g;
  };
  f.slater_point = Vec(dim, 0.0);
  f.subgrad_bound = [](double) { return 1.0; };
  f.exact_sublevel_project = [level](const Vec& x) {
    Vec y = x;
    for (double& v : y) v = std::clamp(v, -level, level);
    return y;
  };
  return f;
}

ConvexFunction preimage_ball_function(std::shared_ptr<const LinearMap> a, Vec center,
                                      double radius) {
  if (!a) throw std::invalid_argument("preimage_ball_function: null map");
  if (center.size() != a->rows())
    throw std::invalid_argument("preimage_ball_function: center dimension mismatch");
  if (!(radius > 0.0)) throw std::invalid_argument("preimage_ball_function: radius");

  // {x : ||Ax - c||^2 <= R^2} is nonempty iff the out-of-range part of c is
  // shorter than R.
  Vec c_in = a->project_range(center);
  double c_perp_sq = std::max(0.0, norm_sq(sub(center, c_in)));
  if (c_perp_sq >= radius * radius)
    throw std::invalid_argument("preimage_ball_function: empty sublevel set");

  ConvexFunction f;
  f.dim = a->cols();
  f.value = [a, center, radius](const Vec& x) {
    Vec r = sub(a->apply(x), center);
    return norm_sq(r) - radius * radius;
  };
  f.subgradient = [a, center](const Vec& x) {
    Vec r = sub(a->apply(x), center);
    return scaled(a->apply_adjoint(r), 2.0);
  };
  if (a->rank() == a->cols()) {
    double s = a->min_pos_sv();
    f.strong_convexity = 2.0 * s * s;
  }
  f.slater_point = a->solve_min_norm(center);  // f there equals c_perp_sq - radius^2 < 0
  double opn = a->op_norm();
  double base = std::sqrt(c_perp_sq);
  f.subgrad_bound = [opn, base](double r) { return 2.0 * opn * (opn * r + base); };

  f.exact_sublevel_project = [a, center, radius, c_perp_sq](const Vec& x) {
    Vec rx = sub(a->apply(x), center);
    if (norm_sq(rx) <= radius * radius) return x;
    const Vec& sigma = a->singular_values();
    Vec t = matvec_t(a->right_basis(), x);
    Vec q = matvec_t(a->left_basis(), center);
    Vec x_range = matvec(a->right_basis(), t);
    Vec x_ker = sub(x, x_range);

    const std::size_t r = sigma.size();
    Vec num(r);
    for (std::size_t i = 0; i < r; ++i) num[i] = sigma[i] * t[i] - q[i];
    auto excess = [&](double mu) {
      double acc = c_perp_sq - radius * radius;
      for (std::size_t i = 0; i < r; ++i) {
        double z = num[i] / (1.0 + mu * sigma[i] * sigma[i]);
        acc += z * z;
      }
      return acc;
    };
    double hi = 1.0;
    int guard = 0;
    while (excess(hi) > 0.0) {
      hi *= 2.0;
      if (++guard > 200)
        throw std::runtime_error("preimage_ball projector: multiplier search failed");
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    double mu = hi;  // feasible side
    Vec s(r);
    for (std::size_t i = 0; i < r; ++i)
      s[i] = (t[i] + mu * sigma[i] * q[i]) / (1.0 + mu * sigma[i] * sigma[i]);
    return add(matvec(a->right_basis(), s), x_ker);
  };
  return f;
}

// ---------------------------------------------------------------------------
// ConvexSetSpec

ConvexSetSpec::ConvexSetSpec(Halfspace h) : set_(std::move(h)) {
  const auto& hs = std::get<Halfspace>(set_);
  if (hs.normal.empty() || norm(hs.normal) == 0.0)
    throw std::invalid_argument("Halfspace: normal must be nonzero");
  dim_ = hs.normal.size();
}

ConvexSetSpec::ConvexSetSpec(Ball b) : set_(std::move(b)) {
  const auto& bl = std::get<Ball>(set_);
  if (!(bl.radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
  dim_ = bl.center.size();
}

ConvexSetSpec::ConvexSetSpec(Box b) : set_(std::move(b)) {
  const auto& bx = std::get<Box>(set_);
  if (bx.lo.size() != bx.hi.size()) throw std::invalid_argument("Box: bound sizes differ");
  for (std::size_t i = 0; i < bx.lo.size(); ++i)
    if (bx.lo[i] > bx.hi[i]) throw std::invalid_argument("Box: lo must not exceed hi");
  dim_ = bx.lo.size();
}

ConvexSetSpec::ConvexSetSpec(AffineSet a) : set_(std::move(a)) {
  const auto& af = std::get<AffineSet>(set_);
  if (af.m.rows() != af.d.size()) throw std::invalid_argument("AffineSet: row count mismatch");
  dim_ = af.m.cols();
  affine_rows_ = std::make_shared<LinearMap>(af.m);
  Vec x_ls = affine_rows_->solve_min_norm(af.d);
  double residual = dist(matvec(af.m, x_ls), af.d);
  if (residual > 1e-10 * (1.0 + norm(af.d)))
    throw std::invalid_argument("AffineSet: inconsistent system");
}

ConvexSetSpec::ConvexSetSpec(Sublevel s) : set_(std::move(s)) {
  const auto& f = std::get<Sublevel>(set_).f;
  if (f.dim == 0 || !f.value || !f.subgradient)
    throw std::invalid_argument("Sublevel: function must have value and subgradient");
  dim_ = f.dim;
}

Vec ConvexSetSpec::project(const Vec& x) const {
  require_dim(x, dim_, "ConvexSetSpec::project");
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Halfspace>) {
          return halfspace_project(s.normal, s.offset, x);
        } else if constexpr (std::is_same_v<T, Ball>) {
          Vec d = sub(x, s.center);
          double nd = norm(d);
          if (nd <= s.radius) return x;
          return add_scaled(s.center, s.radius / nd, d);
        } else if constexpr (std::is_same_v<T, Box>) {
          Vec y = x;
          for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::clamp(y[i], s.lo[i], s.hi[i]);
          return y;
        } else if constexpr (std::is_same_v<T, AffineSet>) {
          Vec residual = sub(matvec(s.m, x), s.d);
          return sub(x, affine_rows_->solve_min_norm(residual));
        } else {
          if (s.f.exact_sublevel_project) return s.f.exact_sublevel_project(x);
          return sublevel_project_iterative(s.f, x);
        }
      },
      set_);
}

double ConvexSetSpec::distance(const Vec& x) const { return dist(x, project(x)); }

bool ConvexSetSpec::contains(const Vec& x, double tol) const { return distance(x) <= tol; }

FixOracleKind ConvexSetSpec::projection_kind() const {
  if (const auto* s = std::get_if<Sublevel>(&set_))
    if (!s->f.exact_sublevel_project) return FixOracleKind::by_iteration;
  return FixOracleKind::exact;
}

Vec project(const ConvexSetSpec& set, const Vec& x) { return set.project(x); }

// ---------------------------------------------------------------------------
// Subgradient projection

Vec subgradient_project(const ConvexFunction& f, const Vec& x) {
  require_dim(x, f.dim, "subgradient_project");
  double fx = f.value(x);
  if (fx <= 0.0) return x;
  Vec g = f.subgradient(x);
  double g2 = norm_sq(g);
  if (g2 == 0.0) throw std::runtime_error("inconsistent subgradient oracle");
  return add_scaled(x, -fx / g2, g);
}

FixedPointOperator projection_operator(ConvexSetSpec set) {
  auto shared = std::make_shared<ConvexSetSpec>(std::move(set));
  FixedPointOperator op;
  op.dim = shared->dim();
  op.sqne_rho = 1.0;  // metric projections are cutters
  op.evaluate = [shared](const Vec& x) { return shared->project(x); };
  op.fix_distance = [shared](const Vec& x) { return shared->distance(x); };
  op.fix_oracle = shared->projection_kind();
  return op;
}

FixedPointOperator subgradient_projection_operator(ConvexFunction f) {
  auto shared = std::make_shared<ConvexFunction>(std::move(f));
  FixedPointOperator op;
  op.dim = shared->dim;
  op.sqne_rho = 1.0;  // subgradient projections are cutters
  op.evaluate = [shared](const Vec& x) { return subgradient_project(*shared, x); };
  if (shared->exact_sublevel_project) {
    op.fix_distance = [shared](const Vec& x) {
      return dist(x, shared->exact_sublevel_project(x));
    };
    op.fix_oracle = FixOracleKind::exact;
  } else {
    op.fix_distance = [shared](const Vec& x) {
      return dist(x, sublevel_project_iterative(*shared, x));
    };
    op.fix_oracle = FixOracleKind::by_iteration;
  }
  return op;
}

// ---------------------------------------------------------------------------
// Operator algebra

FixedPointOperator relax(const FixedPointOperator& t, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("relax: lambda must be positive");
  FixedPointOperator out;
  out.dim = t.dim;
  auto eval = t.evaluate;
  out.evaluate = [eval, lambda](const Vec& x) {
    Vec tx = eval(x);
    return add_scaled(x, lambda, sub(tx, x));
  };
  if (t.sqne_rho && lambda <= *t.sqne_rho + 1.0)
    out.sqne_rho = (*t.sqne_rho + 1.0 - lambda) / lambda;
  out.fix_distance = t.fix_distance;
  out.fix_oracle = t.fix_oracle;
  return out;
}

FixedPointOperator relax(const FixedPointOperator& t,
                         std::function<double(const Vec&)> alpha) {
  if (!alpha) throw std::invalid_argument("relax: missing relaxation function");
  FixedPointOperator out;
  out.dim = t.dim;
  auto eval = t.evaluate;
  out.evaluate = [eval, alpha](const Vec& x) {
    double a = alpha(x);
    if (!(a > 0.0)) throw std::invalid_argument("relax: nonpositive relaxation value");
    Vec tx = eval(x);
    return add_scaled(x, a, sub(tx, x));
  };
  out.fix_distance = t.fix_distance;
  out.fix_oracle = t.fix_oracle;
  return out;
}

FixedPointOperator compose_product(std::vector<FixedPointOperator> ops, const Vec& witness,
                                   double witness_tol) {
  if (ops.empty()) throw std::invalid_argument("compose_product: empty sequence");
  const std::size_t dim = ops.front().dim;
  double rho_min = std::numeric_limits<double>::infinity();
  for (const auto& op : ops) {
    if (op.dim != dim) throw std::invalid_argument("compose_product: dimension mismatch");
    if (!op.sqne_rho || !(*op.sqne_rho > 0.0))
      throw std::invalid_argument("compose_product: operators must carry positive rho");
    rho_min = std::min(rho_min, *op.sqne_rho);
    if (!op.fix_membership(witness, witness_tol))
      throw std::invalid_argument("compose_product: witness is not a common fixed point");
  }

  const double m = static_cast<double>(ops.size());
  FixedPointOperator out;
  out.dim = dim;
  out.sqne_rho = rho_min / m;
  auto shared = std::make_shared<std::vector<FixedPointOperator>>(std::move(ops));
  out.evaluate = [shared](const Vec& x) {
    Vec y = x;
    for (const auto& op : *shared) y = op(y);
    return y;
  };
  bool all_dist = true;
  for (const auto& op : *shared)
    if (!op.fix_distance) all_dist = false;
  if (all_dist) {
    out.fix_distance = [shared](const Vec& x) {
      double d = 0.0;
      for (const auto& op : *shared) d = std::max(d, op.fix_distance(x));
      return d;
    };
    out.fix_oracle = shared->size() == 1 ? shared->front().fix_oracle
                                         : FixOracleKind::lower_bound;
  }
  return out;
}

FixedPointOperator convex_combination(std::vector<double> weights,
                                      std::vector<FixedPointOperator> ops) {
  if (weights.size() != ops.size() || ops.empty())
    throw std::invalid_argument("convex_combination: weight/operator count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("convex_combination: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("convex_combination: weights must sum to 1");
  const std::size_t dim = ops.front().dim;
  for (const auto& op : ops)
    if (op.dim != dim) throw std::invalid_argument("convex_combination: dimension mismatch");

  if (ops.size() == 1) return ops.front();

  FixedPointOperator out;
  out.dim = dim;
  auto shared_ops = std::make_shared<std::vector<FixedPointOperator>>(std::move(ops));
  auto shared_w = std::make_shared<std::vector<double>>(std::move(weights));
  out.evaluate = [shared_ops, shared_w](const Vec& x) {
    Vec acc(x.size(), 0.0);
    for (std::size_t i = 0; i < shared_ops->size(); ++i) {
      Vec t = (*shared_ops)[i](x);
      kernels::axpy((*shared_w)[i], t.data(), acc.data(), acc.size());
    }
    return acc;
  };
  bool all_dist = true;
  for (const auto& op : *shared_ops)
    if (!op.fix_distance) all_dist = false;
  if (all_dist) {
    out.fix_distance = [shared_ops](const Vec& x) {
      double d = 0.0;
      for (const auto& op : *shared_ops) d = std::max(d, op.fix_distance(x));
      return d;
    };
    out.fix_oracle = FixOracleKind::lower_bound;
  }
  return out;
}

double SqneEquivalenceReport::worst() const {
  return std::max({worst_sqne, worst_cutter, worst_inner, worst_relaxed});
}

SqneEquivalenceReport check_sqne_equivalences(const FixedPointOperator& t, double rho,
                                              std::span<const Vec> points,
                                              std::span<const Vec> fix_points) {
  if (fix_points.empty())
    throw std::invalid_argument("check_sqne_equivalences: no fixed points supplied");
  SqneEquivalenceReport rep;
  const double half = (rho + 1.0) / 2.0;
  for (const Vec& x : points) {
    Vec tx = t(x);
    Vec step = sub(tx, x);
    double step2 = norm_sq(step);
    Vec ux = add_scaled(x, half, step);  // T_{(rho+1)/2} x
    // deterministic sampled relaxation in (0, rho + 1]
    double u = std::fmod(std::abs(dot(x, Vec(x.size(), 1.0))) * 12.9898 + 0.373, 1.0);
    double alpha = (rho + 1.0) * (0.25 + 0.5 * u);
    Vec tax = add_scaled(x, alpha, step);
    double ta_step2 = norm_sq(sub(tax, x));
    double coeff = rho / alpha + (1.0 - alpha) / alpha;

    for (const Vec& z : fix_points) {
      double xz2 = norm_sq(sub(x, z));
      rep.worst_sqne = std::max(rep.worst_sqne, norm_sq(sub(tx, z)) - xz2 + rho * step2);
      rep.worst_cutter = std::max(rep.worst_cutter, dot(sub(z, ux), sub(x, ux)));
      rep.worst_inner =
          std::max(rep.worst_inner, half * step2 - dot(step, sub(z, x)));
      rep.worst_relaxed =
          std::max(rep.worst_relaxed, norm_sq(sub(tax, z)) - xz2 + coeff * ta_step2);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Intersection oracles

Vec dykstra_project(std::span<const ConvexSetSpec> sets, const Vec& x,
                    const DykstraOptions& opts) {
  if (sets.empty()) throw std::invalid_argument("dykstra_project: no sets");
  for (const auto& s : sets) require_dim(x, s.dim(), "dykstra_project");
  std::vector<Vec> corrections(sets.size(), Vec(x.size(), 0.0));
  Vec cur = x;
  for (int cycle = 0; cycle < opts.max_cycles; ++cycle) {
    Vec before = cur;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      Vec shifted = add(cur, corrections[i]);
      Vec projected = sets[i].project(shifted);
      corrections[i] = sub(shifted, projected);
      cur = std::move(projected);
    }
    if (dist(cur, before) <= opts.tol) return cur;
  }
  throw std::runtime_error("dykstra_project: did not converge within the cycle cap");
}

Vec project_two_halfspaces(const Halfspace& h1, const Halfspace& h2, const Vec& x) {
  const Vec& a1 = h1.normal;
  const Vec& a2 = h2.normal;
  double v1 = dot(a1, x) - h1.offset;
  double v2 = dot(a2, x) - h2.offset;
  if (v1 <= 0.0 && v2 <= 0.0) return x;

  double n1 = norm(a1), n2 = norm(a2);
  double cosang = dot(a1, a2) / (n1 * n2);
  if (std::abs(cosang) > 1.0 - 1e-14) {
    // parallel boundaries collapse to constraints on one coordinate
    double lo = -std::numeric_limits<double>::infinity();
    double hi = h1.offset / n1;
    double other = h2.offset / n2;
    if (cosang > 0.0) {
      hi = std::min(hi, other);
    } else {
      lo = -other;
    }
    if (lo > hi) throw std::invalid_argument("project_two_halfspaces: empty intersection");
    double t = dot(a1, x) / n1;
    double tc = std::clamp(t, lo, hi);
    return add_scaled(x, (tc - t) / n1, a1);
  }

  Vec p1 = halfspace_project(a1, h1.offset, x);
  if (dot(a2, p1) - h2.offset <= 0.0) return p1;
  Vec p2 = halfspace_project(a2, h2.offset, x);
  if (dot(a1, p2) - h1.offset <= 0.0) return p2;

  // both constraints active: project onto the codimension-2 edge
  double g11 = norm_sq(a1), g22 = norm_sq(a2), g12 = dot(a1, a2);
  double det = g11 * g22 - g12 * g12;
  double mu1 = (g22 * v1 - g12 * v2) / det;
  double mu2 = (g11 * v2 - g12 * v1) / det;
  Vec p = add_scaled(x, -mu1, a1);
  return add_scaled(p, -mu2, a2);
}

Vec project_ball_halfspace(const Ball& b, const Halfspace& h, const Vec& x) {
  auto in_half = [&](const Vec& y) { return dot(h.normal, y) - h.offset <= 0.0; };
  Vec d = sub(x, b.center);
  double nd = norm(d);
  bool in_ball = nd <= b.radius;
  if (in_ball && in_half(x)) return x;

  if (!in_ball) {
    Vec pb = add_scaled(b.center, b.radius / nd, d);
    if (in_half(pb)) return pb;
  }
  Vec ph = halfspace_project(h.normal, h.offset, x);
  if (dist(ph, b.center) <= b.radius) return ph;

  // both active: nearest point on the sphere-hyperplane ring
  double na = norm(h.normal);
  Vec ahat = scaled(h.normal, 1.0 / na);
  double off = (h.offset - dot(h.normal, b.center)) / na;
  if (off < -b.radius) throw std::invalid_argument("project_ball_halfspace: empty intersection");
  if (off > b.radius) off = b.radius;  // hyperplane outside the ball; boundary circle degenerates
  double ring = std::sqrt(std::max(0.0, b.radius * b.radius - off * off));
  Vec w = sub(x, b.center);
  Vec tangent = sub(w, scaled(ahat, dot(w, ahat)));
  double nt = norm(tangent);
  Vec base = add_scaled(b.center, off, ahat);
  if (nt < 1e-300) {
    // pick a deterministic direction orthogonal to the normal
    Vec e(x.size(), 0.0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (std::abs(ahat[i]) < std::abs(ahat[best])) best = i;
    e[best] = 1.0;
    tangent = sub(e, scaled(ahat, dot(e, ahat)));
    nt = norm(tangent);
  }
  return add_scaled(base, ring / nt, tangent);
}

Vec sublevel_project_iterative(const ConvexFunction& f, const Vec& x, double tol) {
  require_dim(x, f.dim, "sublevel_project_iterative");
  if (f.value(x) <= 0.0) return x;

  // y(mu) solves y = x - mu g(y); the multiplier is bisected until the
  // constraint is active.
  auto inner = [&](double mu, Vec y0) {
    Vec y = std::move(y0);
    double theta = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 2000; ++it) {
      Vec target = add_scaled(x, -mu, f.subgradient(y));
      double residual = dist(target, y);
      if (residual <= tol * 1e-2 * (1.0 + norm(y))) break;
      if (residual > prev) theta *= 0.5;
      prev = residual;
      y = add_scaled(y, theta, sub(target, y));
      if (theta < 1e-8) break;
    }
    return y;
  };

  double hi = 1.0;
  Vec y_hi = inner(hi, x);
  int guard = 0;
  while (f.value(y_hi) > 0.0) {
    hi *= 2.0;
    y_hi = inner(hi, y_hi);
    if (++guard > 200)
      throw std::runtime_error("sublevel_project_iterative: multiplier search failed");
  }
  double lo = 0.0;
  Vec y = y_hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    Vec y_mid = inner(mid, y);
    if (f.value(y_mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
      y_hi = y_mid;
    }
    y = y_mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  return y_hi;  // feasible side of the bisection
}

}  // namespace splitfeas
