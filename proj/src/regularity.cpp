#include "splitfeas/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace splitfeas {

Vec sample_ball(const Vec& center, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = center.size();
  Vec dir(n);
  double nrm = 0.0;
  do {
    for (auto& d : dir) d = gauss(rng);
    nrm = norm(dir);
  } while (nrm < 1e-12);
  double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
  return add_scaled(center, r / nrm, dir);
}

double sample_operator_modulus(const FixedPointOperator& t, const Vec& center, double radius,
                               int samples, std::uint64_t seed) {
  if (!t.fix_distance)
    throw std::invalid_argument("sample_operator_modulus: missing fix_distance oracle");
  if (!t.fix_membership(center, 1e-8 * (1.0 + norm(center))))
    throw std::invalid_argument("sample_operator_modulus: center is not a fixed point");
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    Vec x = sample_ball(center, radius, rng);
    double d = t.fix_distance(x);
    if (d < 1e-12) continue;  // skip near-fixed samples, the ratio is 0/0 there
    double residual = dist(t(x), x);
    best = std::min(best, residual / d);
  }
  if (!std::isfinite(best))
    throw std::runtime_error("sample_operator_modulus: no valid samples");
  return best;
}

double subgradient_projection_modulus(const ConvexFunction& f, const Vec& center,
                                      double radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("subgradient_projection_modulus: radius must be positive");
  if (!f.value) throw std::invalid_argument("subgradient_projection_modulus: missing value");
  double fz = f.value(center);
  if (!(fz < 0.0))
    throw std::runtime_error("bounded linear regularity not certified");
  if (!f.subgrad_bound)
    throw std::runtime_error("bounded linear regularity not certified");
  double m = f.subgrad_bound(radius);
  if (!(m > 0.0))
    throw std::runtime_error("bounded linear regularity not certified");
  return -fz / (m * radius);
}

double sample_family_modulus(std::span<const ConvexSetSpec> sets, const Vec& center,
                             double radius, int samples, std::uint64_t seed,
                             const DykstraOptions& dykstra) {
  if (sets.empty()) throw std::invalid_argument("sample_family_modulus: no sets");
  for (const auto& s : sets)
    if (!s.contains(center, 1e-8))
      throw std::invalid_argument("sample_family_modulus: center must lie in every set");
  std::mt19937_64 rng(seed);
  double best = 0.0;
  bool any = false;
  for (int i = 0; i < samples; ++i) {
    Vec x = sample_ball(center, radius, rng);
    double worst_member = 0.0;
    for (const auto& s : sets) worst_member = std::max(worst_member, s.distance(x));
    if (worst_member <= 1e-12) continue;
    Vec p = dykstra_project(sets, x, dykstra);
    best = std::max(best, dist(x, p) / worst_member);
    any = true;
  }
  if (!any) throw std::runtime_error("sample_family_modulus: no valid samples");
  return best;
}

double landweber_modulus(double rho, double delta, double kappa, const LinearMap& a) {
  if (!(delta > 0.0) || !(kappa > 0.0) || rho < 0.0)
    throw std::invalid_argument("landweber_modulus: inputs must be positive");
  double ratio = delta * a.min_pos_sv() / (kappa * a.op_norm());
  return (rho + 1.0) / 2.0 * ratio * ratio;
}

double product_modulus(double rho, std::span<const double> deltas, double kappa, int m) {
  if (!(rho > 0.0) || !(kappa > 0.0) || m <= 0 || deltas.empty())
    throw std::invalid_argument("product_modulus: inputs must be positive");
  double delta = *std::min_element(deltas.begin(), deltas.end());
  if (!(delta > 0.0)) throw std::invalid_argument("product_modulus: inputs must be positive");
  return rho * delta * delta / (2.0 * static_cast<double>(m) * kappa * kappa);
}

double scfp_regularity_bound(const LinearMap& a, double kappa1, double kappa2) {
  if (!(kappa1 > 0.0) || !(kappa2 > 0.0))
    throw std::invalid_argument("scfp_regularity_bound: moduli must be positive");
  return a.min_pos_sv() / (kappa1 * kappa2);
}

RateBound rate_bound(double rho_s, double rho_t, double delta_s, double big_delta,
                     double epsilon, double kappa1) {
  if (!(rho_s > 0.0) || !(rho_t > 0.0) || !(delta_s > 0.0) || !(big_delta > 0.0) ||
      !(epsilon > 0.0) || !(kappa1 > 0.0))
    throw std::invalid_argument("rate_bound: inputs must be positive");
  double rho = std::min(rho_s, rho_t);
  double inner = std::min(delta_s, epsilon * big_delta) / (2.0 * kappa1);
  double gamma = rho * inner * inner;
  double under = 1.0 - rho * gamma * gamma / 2.0;
  if (!(under > 0.0)) throw std::runtime_error("moduli inconsistent");
  double q = std::sqrt(under);
  if (!(q > 0.0) || !(q < 1.0)) throw std::runtime_error("moduli inconsistent");
  return {gamma, q};
}

const char* provenance_name(Provenance p) {
  return p == Provenance::theoretical_bound ? "theoretical-bound" : "sampled-estimate";
}

std::string RegularityEstimate::to_report() const {
  std::ostringstream os;
  os << "radius: " << format_double(radius) << "\n";
  os << "center_norm: " << format_double(norm(center)) << "\n";
  os << "delta_op: " << format_double(delta_op) << "\n";
  os << "delta_op_provenance: " << provenance_name(delta_provenance) << "\n";
  os << "kappa_sets: " << format_double(kappa_sets) << "\n";
  os << "kappa_sets_provenance: " << provenance_name(kappa_provenance) << "\n";
  os << "rho: " << format_double(rho) << "\n";
  os << "delta_in: " << format_double(delta_in) << "\n";
  os << "kappa_in: " << format_double(kappa_in) << "\n";
  os << "spectral_ratio: " << format_double(spectral_ratio) << "\n";
  os << "delta_landweber: " << format_double(delta_landweber) << "\n";
  os << "gamma: " << format_double(gamma) << "\n";
  os << "q_rate: " << format_double(q_rate) << "\n";
  os << "seed: " << seed << "\n";
  return os.str();
}

}  // namespace splitfeas
