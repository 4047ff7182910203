#include "splitfeas/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace splitfeas {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

bool cutter_range(Variant v) { return v != Variant::landweber_sqne; }

}  // namespace

void SCFPInstance::validate(double tol) const {
  if (!a) throw std::invalid_argument("SCFPInstance: missing linear map");
  if (s.dim != a->cols() || t.dim != a->rows())
    throw std::invalid_argument("SCFPInstance: operator dimensions do not match A");
  if (solution_witness.size() != a->cols())
    throw std::invalid_argument("SCFPInstance: witness dimension mismatch");
  if (dist(s(solution_witness), solution_witness) > tol)
    throw std::runtime_error("SCFPInstance invariant violated: witness not fixed by S");
  Vec aw = a->apply(solution_witness);
  if (dist(t(aw), aw) > tol)
    throw std::runtime_error("SCFPInstance invariant violated: witness image not fixed by T");
  if (!solution_distance)
    throw std::invalid_argument("SCFPInstance: missing solution distance oracle");
  if (solution_distance(solution_witness) > tol)
    throw std::runtime_error(
        "SCFPInstance invariant violated: witness not at distance zero from F");
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::landweber_sqne: return "landweber_sqne";
    case Variant::cutter_relaxed: return "cutter_relaxed";
    case Variant::classic_cq: return "classic_cq";
    case Variant::subgradient_cq: return "subgradient_cq";
  }
  return "unknown";
}

IterationTrace run(const SCFPInstance& instance, const SolverConfig& config, const Vec& x0) {
  if (!(config.epsilon > 0.0) || !(config.epsilon < 1.0))
    throw std::invalid_argument("run: epsilon must lie in (0, 1)");
  if (config.max_iter <= 0) throw std::invalid_argument("run: max_iter must be positive");
  if (x0.size() != instance.a->cols())
    throw std::invalid_argument("run: x0 dimension mismatch");
  if (!instance.s.sqne_rho || !(*instance.s.sqne_rho > 0.0) || !instance.t.sqne_rho ||
      !(*instance.t.sqne_rho > 0.0))
    throw std::invalid_argument("run: operators must carry positive SQNE constants");

  const LinearMap& a = *instance.a;
  const double rho_s = *instance.s.sqne_rho;
  const double rho_t = *instance.t.sqne_rho;
  const double eps = config.epsilon;
  const double lambda_hi = cutter_range(config.variant) ? 2.0 - eps : 1.0;
  auto schedule = config.lambda_schedule ? config.lambda_schedule
                                         : [](int) { return 1.0; };

  IterationTrace trace;
  if (cutter_range(config.variant)) {
    if (rho_t < 1.0)
      throw std::invalid_argument("run: cutter-range variants need a cutter T (rho >= 1)");
    // U = Id + (2 - eps)(T - Id) is (rho_t - 1 + eps)/(2 - eps)-SQNE and the
    // iteration is the [eps, 1]-range method for U
    double rho_u = (rho_t - 1.0 + eps) / (2.0 - eps);
    trace.strengthened_coeff = std::min(rho_s, rho_u) / 2.0;
  } else {
    trace.strengthened_coeff = std::min(rho_s, rho_t) / 2.0;
  }

  const double op2 = a.op_norm() * a.op_norm();
  const Vec& witness = instance.solution_witness;

  Vec x = x0;
  trace.iterates.push_back(x);
  trace.dist_f.push_back(instance.solution_distance(x));

  for (int k = 0; k < config.max_iter; ++k) {
    double lambda = schedule(k);
    if (lambda < eps - 1e-12 || lambda > lambda_hi + 1e-12)
      throw std::invalid_argument("run: lambda schedule leaves its admissible range");

    Vec ax = a.apply(x);
    Vec v = sub(instance.t(ax), ax);
    double tau_used = 1.0;
    Vec z;
    if (config.sigma_mode == SigmaMode::tau) {
      double vn2 = norm_sq(v);
      if (vn2 == 0.0) {
        z = x;
      } else {
        Vec w = a.apply_adjoint(v);
        double wn2 = norm_sq(w);
        if (wn2 == 0.0) throw std::runtime_error("fixed-set equivalence violated");
        z = add_scaled(x, lambda * vn2 / wn2, w);
        tau_used = op2 * vn2 / wn2;
      }
    } else {
      Vec w = a.apply_adjoint(v);
      z = add_scaled(x, lambda / op2, w);
    }
    Vec x_next = instance.s(z);

    double step = dist(x_next, x);
    double slack = dist(x_next, witness) - dist(x, witness);
    if (slack > 1e-6)
      throw std::runtime_error("SQNE violation: Fejer monotonicity failed");

    bool stop = step <= config.stop_tol * (1.0 + norm(x));
    bool terminal = stop || k + 1 == config.max_iter;
    double dist_next = kNan;
    if (terminal || config.dist_every <= 1 || ((k + 1) % config.dist_every) == 0)
      dist_next = instance.solution_distance(x_next);

    IterationRecord rec;
    rec.k = k;
    rec.step_norm = step;
    rec.dist_f = trace.dist_f.back();
    rec.ratio = (std::isfinite(rec.dist_f) && std::isfinite(dist_next) && rec.dist_f > 0.0)
                    ? dist_next / rec.dist_f
                    : kNan;
    rec.fejer_slack = slack;
    rec.tau_value = tau_used;
    trace.records.push_back(rec);

    trace.iterates.push_back(x_next);
    trace.dist_f.push_back(dist_next);
    x = std::move(x_next);

    if (stop) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

FejerAuditReport fejer_audit(const IterationTrace& trace, std::span<const Vec> witnesses,
                             double strengthened_coeff) {
  if (witnesses.empty()) throw std::invalid_argument("fejer_audit: no witnesses");
  FejerAuditReport rep;
  rep.worst_plain = -std::numeric_limits<double>::infinity();
  rep.worst_strengthened = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < trace.iterates.size(); ++k) {
    const Vec& cur = trace.iterates[k];
    const Vec& next = trace.iterates[k + 1];
    double step2 = norm_sq(sub(next, cur));
    for (const Vec& z : witnesses) {
      double dn = dist(next, z);
      double dc = dist(cur, z);
      rep.worst_plain = std::max(rep.worst_plain, dn - dc);
      rep.worst_strengthened =
          std::max(rep.worst_strengthened, dn * dn - dc * dc + strengthened_coeff * step2);
    }
  }
  return rep;
}

ObservedRate observed_rate(const IterationTrace& trace, int burn_in) {
  if (burn_in < 0) throw std::invalid_argument("observed_rate: negative burn_in");
  int usable_points = 0;
  for (double d : trace.dist_f)
    if (std::isfinite(d) && d > 1e-13) ++usable_points;
  if (usable_points < burn_in + 10)
    throw std::runtime_error("observed_rate: insufficient usable iterations");

  double q_max = 0.0;
  bool any = false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t k = static_cast<std::size_t>(burn_in); k + 1 < trace.dist_f.size(); ++k) {
    double dk = trace.dist_f[k], dn = trace.dist_f[k + 1];
    if (!std::isfinite(dk) || dk <= 1e-13) continue;
    double lk = std::log(dk);
    sx += static_cast<double>(k);
    sy += lk;
    sxx += static_cast<double>(k) * static_cast<double>(k);
    sxy += static_cast<double>(k) * lk;
    ++cnt;
    if (!std::isfinite(dn) || dn <= 1e-13) continue;
    q_max = std::max(q_max, dn / dk);
    any = true;
  }
  if (!any || cnt < 2)
    throw std::runtime_error("observed_rate: insufficient usable iterations");
  double denom = static_cast<double>(cnt) * sxx - sx * sx;
  double slope = (static_cast<double>(cnt) * sxy - sx * sy) / denom;
  return {q_max, std::exp(slope)};
}

TailBoundReport tail_bound_check(const IterationTrace& trace, double q, double tol) {
  if (!(q > 0.0) || !(q < 1.0))
    throw std::invalid_argument("tail_bound_check: q must lie in (0, 1)");
  if (trace.iterates.empty()) throw std::invalid_argument("tail_bound_check: empty trace");
  double d0 = trace.dist_f.front();
  if (!std::isfinite(d0))
    throw std::invalid_argument("tail_bound_check: d(x_0, F) was not recorded");
  const Vec& limit = trace.iterates.back();
  TailBoundReport rep;
  rep.worst_slack = -std::numeric_limits<double>::infinity();
  double qk = 1.0;
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    double slack = dist(trace.iterates[k], limit) - 2.0 * d0 * qk;
    rep.worst_slack = std::max(rep.worst_slack, slack);
    if (slack > tol) ++rep.violations;
    qk *= q;
  }
  return rep;
}

void write_trace_csv(const IterationTrace& trace, std::ostream& os) {
  os << "k,step_norm,dist_F,ratio,fejer_slack,tau\n";
  for (const auto& r : trace.records) {
    os << r.k << ',' << format_double(r.step_norm) << ',' << format_double(r.dist_f) << ','
       << format_double(r.ratio) << ',' << format_double(r.fejer_slack) << ','
       << format_double(r.tau_value) << '\n';
  }
}

}  // namespace splitfeas
