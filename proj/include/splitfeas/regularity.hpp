#ifndef SPLITFEAS_REGULARITY_HPP
#define SPLITFEAS_REGULARITY_HPP

#include <cstdint>
#include <span>
#include <string>

#include "splitfeas/fixops.hpp"
#include "splitfeas/linop.hpp"

namespace splitfeas {

// Uniform draw from B(center, radius): Gaussian direction, u^(1/dim) radial scale.
Vec sample_ball(const Vec& center, double radius, std::mt19937_64& rng);

// min over sampled x in B(center, radius) of ||Tx - x|| / d(x, Fix T).
// An over-estimate of the true modulus over the ball; sampling can only
// falsify a claimed bound, never certify one.
double sample_operator_modulus(const FixedPointOperator& t, const Vec& center, double radius,
                               int samples, std::uint64_t seed);

// delta = -f(center) / (M radius) with M = subgrad_bound(radius); valid over
// B(center, radius) when f(center) < 0.
double subgradient_projection_modulus(const ConvexFunction& f, const Vec& center,
                                      double radius);

// max over sampled x of d(x, intersection) / max_i d(x, C_i); an
// under-estimate of the family modulus kappa.
double sample_family_modulus(std::span<const ConvexSetSpec> sets, const Vec& center,
                             double radius, int samples, std::uint64_t seed,
                             const DykstraOptions& dykstra = {});

// ((rho+1)/2) (delta |A| / (kappa ||A||))^2
double landweber_modulus(double rho, double delta, double kappa, const LinearMap& a);

// rho (min_i delta_i)^2 / (2 m kappa^2)
double product_modulus(double rho, std::span<const double> deltas, double kappa, int m);

// |A| / (kappa1 kappa2)
double scfp_regularity_bound(const LinearMap& a, double kappa1, double kappa2);

struct RateBound {
  double gamma;
  double q;
};
// Gamma = min{rho_s, rho_t} (min{delta_s, epsilon Delta} / (2 kappa1))^2 and
// q = sqrt(1 - min{rho_s, rho_t} Gamma^2 / 2).
RateBound rate_bound(double rho_s, double rho_t, double delta_s, double big_delta,
                     double epsilon, double kappa1);

enum class Provenance { theoretical_bound, sampled_estimate };
const char* provenance_name(Provenance p);

struct RegularityEstimate {
  Vec center;
  double radius = 0.0;
  double delta_op = 0.0;
  Provenance delta_provenance = Provenance::sampled_estimate;
  double kappa_sets = 0.0;
  Provenance kappa_provenance = Provenance::sampled_estimate;
  // inputs the Landweber modulus was computed from
  double rho = 0.0;
  double delta_in = 0.0;
  double kappa_in = 0.0;
  double spectral_ratio = 0.0;  // |A| / ||A||
  double delta_landweber = 0.0;
  double gamma = 0.0;
  double q_rate = 1.0;
  std::uint64_t seed = 0;

  std::string to_report() const;  // key: value lines
};

}  // namespace splitfeas

#endif
