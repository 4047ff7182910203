#ifndef SPLITFEAS_HARNESS_HPP
#define SPLITFEAS_HARNESS_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "splitfeas/regularity.hpp"
#include "splitfeas/solver.hpp"

namespace splitfeas {

using KeyValues = std::map<std::string, std::string>;

// Ground-truth moduli recorded at generation time.  kappa values are set
// only where an analytic formula exists; estimators fill the gaps.
struct AnalyticModuli {
  double delta_s = 1.0;
  double delta_t = 1.0;
  std::optional<double> kappa1;  // family {Fix S, A^-1(Fix T)}
  std::optional<double> kappa2;  // family {im A, Fix T}
  double radius = 10.0;          // ball radius the certificates refer to
};

struct GeneratedInstance {
  SCFPInstance instance;
  AnalyticModuli moduli;
  // F expressed as an intersection of sets with exact projections, the
  // cross-check oracle behind solution_distance.
  std::vector<ConvexSetSpec> solution_sets;
  std::optional<ConvexSetSpec> set_c;  // Fix S in the domain space
  std::optional<ConvexSetSpec> set_q;  // Fix T in the image space
  std::optional<ConvexFunction> func_c;
  std::optional<ConvexFunction> func_q;
};

// recipes: halfspace (param angle), ball-halfspace, sublevel-slater,
// orthogonal-A.  Every instance is validated and its analytic ground truths
// re-verified against the Dykstra oracle before it is returned.
GeneratedInstance generate_instance(const std::string& recipe, std::size_t n, std::size_t m,
                                    std::uint64_t seed, const KeyValues& params = {});

struct IniSection {
  std::string name;
  KeyValues values;
};
std::vector<IniSection> parse_ini(std::istream& is);
std::vector<IniSection> parse_ini_file(const std::string& path);

struct EntryConfig {
  std::string label;
  std::string recipe = "halfspace";
  std::size_t n = 2, m = 2;
  KeyValues params;
  SolverConfig solver;
  double x0_radius = 2.0;
  std::optional<std::uint64_t> seed;
  bool inject_witness_fault = false;  // fault-injection hook for audit tests
};

struct BenchmarkSuite {
  std::vector<EntryConfig> entries;
  std::uint64_t seed = 0;
  int workers = 1;
};

BenchmarkSuite parse_suite_file(const std::string& path);
// [instance] + [solver] (+ [run]) sections
EntryConfig parse_config_file(const std::string& path);
EntryConfig entry_from_sections(const std::vector<IniSection>& sections);

// "m n" header then m rows of n reals.
Matrix read_matrix_file(const std::string& path);
// one decimal per line
Vec read_vector_file(const std::string& path);

BenchmarkSuite default_suite(std::uint64_t seed = 2024);

// Theoretical linear rate for the configured variant; requires analytic
// kappa1/kappa2.  Cutter-range variants are folded through the
// U = Id + (2 - eps)(T - Id) reparametrization first.
std::optional<RateBound> theoretical_rate(const GeneratedInstance& gen,
                                          const SolverConfig& config);

RegularityEstimate build_regularity_estimate(const GeneratedInstance& gen,
                                             std::uint64_t seed, int samples = 200);

struct EntryOutcome {
  std::string label;
  std::string variant;
  int iterations = 0;
  double final_dist = 0.0;
  double observed_q = 0.0;      // NaN when not measurable
  double theoretical_q = 0.0;   // NaN when no analytic bound
  bool ok = true;
  bool input_error = false;
  std::vector<std::string> failures;
  std::string csv;
  std::string report;
};

EntryOutcome run_entry(const EntryConfig& entry, std::uint64_t suite_seed, std::size_t index);

// Writes one CSV and one regularity report per entry plus summary.txt.
// Returns 0 on success, 2 on audit failure, 3 on input error.
int run_suite(const BenchmarkSuite& suite, const std::string& out_dir, std::ostream& log);

}  // namespace splitfeas

#endif
