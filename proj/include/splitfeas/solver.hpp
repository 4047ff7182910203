#ifndef SPLITFEAS_SOLVER_HPP
#define SPLITFEAS_SOLVER_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>

#include "splitfeas/landweber.hpp"

namespace splitfeas {

// Find x fixed by S with Ax fixed by T.  The witness certifies the solution
// set F is nonempty; solution_distance is the trusted oracle for d(., F).
struct SCFPInstance {
  std::shared_ptr<const LinearMap> a;
  FixedPointOperator s;  // acts on R^n
  FixedPointOperator t;  // acts on R^m
  Vec solution_witness;
  std::function<double(const Vec&)> solution_distance;
  std::string label;

  // Throws naming the violated invariant.
  void validate(double tol = 1e-10) const;
};

enum class Variant { landweber_sqne, cutter_relaxed, classic_cq, subgradient_cq };
const char* variant_name(Variant v);

struct SolverConfig {
  Variant variant = Variant::classic_cq;
  SigmaMode sigma_mode = SigmaMode::one;
  double epsilon = 0.05;
  // iteration index -> relaxation; defaults to the constant 1.  Must stay in
  // [epsilon, 1] for landweber_sqne and [epsilon, 2 - epsilon] otherwise.
  std::function<double(int)> lambda_schedule;
  int max_iter = 10000;
  double stop_tol = 1e-10;
  std::uint64_t seed = 0;
  int dist_every = 1;  // compute d(., F) every k-th iteration (last always)
};

struct IterationRecord {
  int k = 0;
  double step_norm = 0.0;
  double dist_f = 0.0;      // d(x_k, F)
  double ratio = 0.0;       // d(x_{k+1}, F) / d(x_k, F); NaN when undefined
  double fejer_slack = 0.0; // max over witnesses of ||x_{k+1}-z|| - ||x_k-z||
  double tau_value = 1.0;   // sigma(x_k) used
};

struct IterationTrace {
  std::vector<Vec> iterates;   // x_0 .. x_K
  std::vector<double> dist_f;  // d(x_k, F), NaN where skipped
  std::vector<IterationRecord> records;  // one per transition
  bool converged = false;
  // min{rho_S, rho_T}/2 coefficient certified for this run (reparametrized
  // for the cutter-range variants)
  double strengthened_coeff = 0.0;
};

// x_{k+1} = S(x_k + lambda_k sigma(x_k)/||A||^2 A^T(T(A x_k) - A x_k)); with
// sigma = tau the inner step uses the norm-free extrapolated form.  Aborts
// with "SQNE violation" if Fejer monotonicity fails beyond 1e-6.
IterationTrace run(const SCFPInstance& instance, const SolverConfig& config, const Vec& x0);

struct FejerAuditReport {
  double worst_plain = 0.0;
  double worst_strengthened = 0.0;
};
// Checks the plain and the strengthened Fejer inequality at every recorded
// transition against every witness.
FejerAuditReport fejer_audit(const IterationTrace& trace, std::span<const Vec> witnesses,
                             double strengthened_coeff);

struct ObservedRate {
  double q_max = 0.0;  // max post-burn-in ratio of consecutive distances
  double q_lsq = 0.0;  // slope of log d(x_k, F), secondary estimate
};
ObservedRate observed_rate(const IterationTrace& trace, int burn_in);

struct TailBoundReport {
  double worst_slack = 0.0;
  int violations = 0;
};
// ||x_k - x_inf|| <= 2 d(x_0, F) q^k with x_inf the final iterate.
TailBoundReport tail_bound_check(const IterationTrace& trace, double q, double tol = 1e-8);

// CSV with header k,step_norm,dist_F,ratio,fejer_slack,tau at 17 significant
// digits.
void write_trace_csv(const IterationTrace& trace, std::ostream& os);

}  // namespace splitfeas

#endif
