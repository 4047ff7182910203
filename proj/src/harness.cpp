#include "splitfeas/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace splitfeas {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double to_double(const KeyValues& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad numeric value for key '" + key + "'");
  }
}

std::uint64_t to_u64(const KeyValues& kv, const std::string& key, std::uint64_t fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer value for key '" + key + "'");
  }
}

std::string get_str(const KeyValues& kv, const std::string& key, const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

Halfspace pullback_halfspace(const LinearMap& a, const Halfspace& image_hs) {
  Vec normal = a.apply_adjoint(image_hs.normal);
  if (norm(normal) < 1e-14)
    throw std::invalid_argument("infeasible recipe parameters: degenerate pullback normal");
  return Halfspace{normal, image_hs.offset};
}

// kappa for two halfspaces with unit-normal angle gamma: 1/cos(gamma/2).
double two_halfspace_kappa(const Vec& n1, const Vec& n2) {
  double c = dot(n1, n2) / (norm(n1) * norm(n2));
  c = std::clamp(c, -1.0, 1.0);
  double denom = std::sqrt((1.0 + c) / 2.0);
  if (denom < 1e-8)
    throw std::invalid_argument("infeasible recipe parameters: opposing halfspaces");
  return 1.0 / denom;
}

// A = U diag(sigma) V1^T with controlled singular values in [1, 2].
Matrix controlled_matrix(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  if (m > n)
    throw std::invalid_argument("infeasible recipe parameters: needs m <= n for surjective A");
  Matrix u = random_orthogonal(m, rng);
  Matrix vfull = random_orthogonal(n, rng);
  Vec sigma(m);
  for (std::size_t i = 0; i < m; ++i)
    sigma[i] = 1.0 + (m == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(m - 1));
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < m; ++k) acc += sigma[k] * u(i, k) * vfull(j, k);
      a(i, j) = acc;
    }
  return a;
}

Vec unit_vector(std::size_t n, std::size_t axis) {
  Vec e(n, 0.0);
  e[axis] = 1.0;
  return e;
}

// Interior witness of {<e1,x> <= 0} n {<a,x> <= -1} along the negated
// bisector of the two normals.
Vec wedge_witness(const Vec& e1, const Vec& a_unit) {
  Vec dir = add(e1, a_unit);
  double nd = norm(dir);
  if (nd < 1e-6)
    throw std::invalid_argument("infeasible recipe parameters: nearly opposing halfspaces");
  return scaled(dir, -4.0 / (nd * nd));
}

void cross_check_solution_oracle(const GeneratedInstance& gen, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x0c0ffee));
  for (int i = 0; i < 10; ++i) {
    Vec x = sample_ball(gen.instance.solution_witness, 3.0, rng);
    double d_oracle = gen.instance.solution_distance(x);
    Vec p = dykstra_project(gen.solution_sets, x, DykstraOptions{1e-11, 100000});
    double d_dykstra = dist(x, p);
    if (std::abs(d_oracle - d_dykstra) > 1e-9 * (1.0 + d_dykstra))
      throw std::runtime_error("instance generation: oracle disagrees with Dykstra cross-check");
  }
}

GeneratedInstance make_halfspace_recipe(std::size_t n, std::size_t m, std::uint64_t seed,
                                        const KeyValues& params, bool orthogonal) {
  if (n < 2 || m < 2)
    throw std::invalid_argument("infeasible recipe parameters: need n, m >= 2");
  std::mt19937_64 rng(seed);

  std::shared_ptr<const LinearMap> a;
  Halfspace image_hs{Vec(m, 0.0), -1.0};
  double angle = to_double(params, "angle", 0.0);
  if (orthogonal) {
    if (n != m) throw std::invalid_argument("infeasible recipe parameters: orthogonal-A needs n == m");
    a = std::make_shared<LinearMap>(random_orthogonal(n, rng));
    Vec u = random_vector(m, rng);
    double nu = norm(u);
    image_hs.normal = scaled(u, 1.0 / nu);
  } else if (auto it = params.find("matrix_file"); it != params.end()) {
    a = std::make_shared<LinearMap>(read_matrix_file(it->second));
    if (a->rows() != m || a->cols() != n)
      throw std::invalid_argument("matrix file dimensions disagree with n/m");
    image_hs.normal = unit_vector(m, 0);
  } else {
    Matrix d(m, n);
    for (std::size_t i = 0; i < std::min(m, n); ++i) d(i, i) = i == 0 ? 2.0 : 1.0;
    a = std::make_shared<LinearMap>(std::move(d));
    if (angle == 0.0) {
      image_hs.normal = unit_vector(m, 0);  // pullback normal (2, 0, ...)
    } else {
      // pullback normal (cos angle, sin angle, 0, ...) of unit length
      image_hs.normal = Vec(m, 0.0);
      image_hs.normal[0] = std::cos(angle) / 2.0;
      image_hs.normal[1] = std::sin(angle);
    }
  }

  Halfspace domain_hs{unit_vector(n, 0), 0.0};
  Halfspace pulled = pullback_halfspace(*a, image_hs);
  Vec pulled_unit = scaled(pulled.normal, 1.0 / norm(pulled.normal));

  GeneratedInstance gen;
  gen.instance.a = a;
  gen.instance.s = projection_operator(ConvexSetSpec(domain_hs));
  gen.instance.t = projection_operator(ConvexSetSpec(image_hs));
  if (angle == 0.0 && !orthogonal && params.find("matrix_file") == params.end()) {
    gen.instance.solution_witness = unit_vector(n, 0);
    gen.instance.solution_witness[0] = -1.0;  // the canonical witness (-1, 0, ...)
  } else {
    gen.instance.solution_witness = wedge_witness(domain_hs.normal, pulled_unit);
  }
  gen.instance.solution_distance = [domain_hs, pulled](const Vec& x) {
    return dist(x, project_two_halfspaces(domain_hs, pulled, x));
  };
  gen.instance.label = orthogonal ? "orthogonal-A" : "halfspace";

  gen.moduli.delta_s = 1.0;
  gen.moduli.delta_t = 1.0;
  gen.moduli.kappa1 = two_halfspace_kappa(domain_hs.normal, pulled.normal);
  if (a->rank() == m) gen.moduli.kappa2 = 1.0;  // surjective A: im A is everything
  gen.moduli.radius = to_double(params, "radius", 10.0);

  gen.solution_sets.emplace_back(domain_hs);
  gen.solution_sets.emplace_back(pulled);
  gen.set_c = ConvexSetSpec(domain_hs);
  gen.set_q = ConvexSetSpec(image_hs);
  return gen;
}

GeneratedInstance make_ball_halfspace_recipe(std::size_t n, std::size_t m,
                                             std::uint64_t seed, const KeyValues& params) {
  std::mt19937_64 rng(seed);
  auto a = std::make_shared<LinearMap>(controlled_matrix(m, n, rng));

  Vec center = scaled(random_vector(n, rng), 0.5);
  Ball ball{center, 2.0};
  Vec aq = random_vector(m, rng);
  aq = scaled(aq, 1.0 / norm(aq));
  double b = dot(aq, a->apply(center)) + 1.0;  // Slater margin 1 at the ball center
  Halfspace image_hs{aq, b};
  Halfspace pulled = pullback_halfspace(*a, image_hs);

  GeneratedInstance gen;
  gen.instance.a = a;
  gen.instance.s = projection_operator(ConvexSetSpec(ball));
  gen.instance.t = projection_operator(ConvexSetSpec(image_hs));
  gen.instance.solution_witness = center;
  gen.instance.solution_distance = [ball, pulled](const Vec& x) {
    return dist(x, project_ball_halfspace(ball, pulled, x));
  };
  gen.instance.label = "ball-halfspace";

  gen.moduli.delta_s = 1.0;
  gen.moduli.delta_t = 1.0;
  gen.moduli.kappa2 = 1.0;  // controlled_matrix is surjective
  gen.moduli.radius = to_double(params, "radius", 6.0);

  gen.solution_sets.emplace_back(ball);
  gen.solution_sets.emplace_back(pulled);
  gen.set_c = ConvexSetSpec(ball);
  gen.set_q = ConvexSetSpec(image_hs);
  return gen;
}

GeneratedInstance make_sublevel_recipe(std::size_t n, std::size_t m, std::uint64_t seed,
                                       const KeyValues& params) {
  std::mt19937_64 rng(seed);
  auto a = std::make_shared<LinearMap>(controlled_matrix(m, n, rng));
  Vec z = scaled(random_vector(n, rng), 0.5);

  // c = max of two affine pieces, c(z) = -1
  Vec g1, g2;
  double cosang = 1.0;
  do {
    g1 = random_vector(n, rng);
    g2 = random_vector(n, rng);
    g1 = scaled(g1, 1.0 / norm(g1));
    g2 = scaled(g2, 1.0 / norm(g2));
    cosang = dot(g1, g2);
  } while (std::abs(cosang) > 0.9);
  Vec offsets{dot(g1, z) + 1.0, dot(g2, z) + 1.0};
  ConvexFunction c = max_affine_function({g1, g2}, offsets);
  c.slater_point = z;

  Vec q0 = a->apply(z);
  const double radius_q = 1.5;
  ConvexFunction q = ball_function(q0, radius_q);

  GeneratedInstance gen;
  gen.instance.a = a;
  gen.instance.s = subgradient_projection_operator(c);
  gen.instance.t = subgradient_projection_operator(q);
  gen.instance.solution_witness = z;
  gen.instance.label = "sublevel-slater";

  ConvexFunction preimage = preimage_ball_function(a, q0, radius_q);
  gen.solution_sets.emplace_back(Sublevel{c});
  gen.solution_sets.emplace_back(Sublevel{preimage});
  auto sets = std::make_shared<std::vector<ConvexSetSpec>>(gen.solution_sets);
  gen.instance.solution_distance = [sets](const Vec& x) {
    return dist(x, dykstra_project(*sets, x, DykstraOptions{1e-11, 100000}));
  };

  gen.moduli.radius = to_double(params, "radius", 4.0);
  gen.moduli.delta_s = subgradient_projection_modulus(c, z, gen.moduli.radius);
  gen.moduli.delta_t =
      subgradient_projection_modulus(q, q0, gen.moduli.radius * a->op_norm());
  gen.moduli.kappa2 = 1.0;  // surjective A
  gen.set_c = ConvexSetSpec(Sublevel{c});
  gen.set_q = ConvexSetSpec(Sublevel{q});
  gen.func_c = c;
  gen.func_q = q;

  // generation certificate: both Slater values strictly negative
  if (!(c.value(z) < 0.0) || !(q.value(a->apply(z)) < 0.0))
    throw std::runtime_error("instance generation: Slater certificate failed");
  return gen;
}

void verify_orthogonal_tau(const GeneratedInstance& gen, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0x7a0));
  for (int i = 0; i < 5; ++i) {
    Vec x = sample_ball(Vec(gen.instance.a->cols(), 0.0), 3.0, rng);
    if (std::abs(tau(*gen.instance.a, gen.instance.t, x) - 1.0) > 1e-12)
      throw std::runtime_error("instance generation: orthogonal-A tau certificate failed");
  }
}

std::function<double(int)> parse_lambda_schedule(const std::string& text) {
  if (text.rfind("constant:", 0) == 0) {
    double v = std::stod(text.substr(9));
    return [v](int) { return v; };
  }
  if (text.rfind("alternating:", 0) == 0) {
    std::string rest = text.substr(12);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("lambda preset 'alternating' needs two values");
    double lo = std::stod(rest.substr(0, comma));
    double hi = std::stod(rest.substr(comma + 1));
    return [lo, hi](int k) { return k % 2 == 0 ? lo : hi; };
  }
  throw std::invalid_argument("unknown lambda preset: " + text);
}

Variant parse_variant(const std::string& text) {
  if (text == "landweber_sqne") return Variant::landweber_sqne;
  if (text == "cutter_relaxed") return Variant::cutter_relaxed;
  if (text == "classic_cq") return Variant::classic_cq;
  if (text == "subgradient_cq") return Variant::subgradient_cq;
  throw std::invalid_argument("unknown solver variant: " + text);
}

SigmaMode parse_sigma(const std::string& text) {
  if (text == "one") return SigmaMode::one;
  if (text == "tau") return SigmaMode::tau;
  throw std::invalid_argument("unknown sigma mode: " + text);
}

std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& ch : out)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  return out;
}

}  // namespace

GeneratedInstance generate_instance(const std::string& recipe, std::size_t n, std::size_t m,
                                    std::uint64_t seed, const KeyValues& params) {
  GeneratedInstance gen;
  if (recipe == "halfspace") {
    gen = make_halfspace_recipe(n, m, seed, params, false);
  } else if (recipe == "orthogonal-A") {
    gen = make_halfspace_recipe(n, m, seed, params, true);
  } else if (recipe == "ball-halfspace") {
    gen = make_ball_halfspace_recipe(n, m, seed, params);
  } else if (recipe == "sublevel-slater") {
    gen = make_sublevel_recipe(n, m, seed, params);
  } else {
    throw std::invalid_argument("unknown recipe: " + recipe);
  }
  gen.instance.validate(1e-10);
  cross_check_solution_oracle(gen, seed);
  if (recipe == "orthogonal-A") verify_orthogonal_tau(gen, seed);
  return gen;
}

std::vector<IniSection> parse_ini(std::istream& is) {
  std::vector<IniSection> sections;
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    if (line.front() == '[') {
      if (line.back() != ']') throw std::invalid_argument("malformed section header: " + line);
      sections.push_back({line.substr(1, line.size() - 2), {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed config line: " + line);
    if (sections.empty()) sections.push_back({"", {}});
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    sections.back().values[trim(key)] = trim(value);
  }
  return sections;
}

std::vector<IniSection> parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_ini(in);
}

namespace {

EntryConfig entry_from_kv(const KeyValues& kv) {
  EntryConfig e;
  e.label = get_str(kv, "label", "entry");
  e.recipe = get_str(kv, "recipe", "halfspace");
  e.n = static_cast<std::size_t>(to_u64(kv, "n", 2));
  e.m = static_cast<std::size_t>(to_u64(kv, "m", 2));
  for (const char* key : {"angle", "radius", "matrix_file"})
    if (auto it = kv.find(key); it != kv.end()) e.params[key] = it->second;
  e.solver.variant = parse_variant(get_str(kv, "variant", "classic_cq"));
  e.solver.sigma_mode = parse_sigma(get_str(kv, "sigma", "one"));
  e.solver.epsilon = to_double(kv, "epsilon", 0.05);
  e.solver.lambda_schedule = parse_lambda_schedule(get_str(kv, "lambda", "constant:1.0"));
  e.solver.max_iter = static_cast<int>(to_u64(kv, "max_iter", 10000));
  e.solver.stop_tol = to_double(kv, "stop_tol", 1e-10);
  e.solver.dist_every = static_cast<int>(to_u64(kv, "dist_every", 1));
  e.x0_radius = to_double(kv, "x0_radius", 2.0);
  if (auto it = kv.find("seed"); it != kv.end()) e.seed = std::stoull(it->second);
  e.inject_witness_fault = get_str(kv, "inject_witness_fault", "false") == "true";
  return e;
}

}  // namespace

EntryConfig entry_from_sections(const std::vector<IniSection>& sections) {
  KeyValues merged;
  for (const auto& sec : sections)
    if (sec.name == "instance" || sec.name == "solver" || sec.name == "run" ||
        sec.name == "entry" || sec.name.empty())
      for (const auto& [k, v] : sec.values) merged[k] = v;
  return entry_from_kv(merged);
}

EntryConfig parse_config_file(const std::string& path) {
  return entry_from_sections(parse_ini_file(path));
}

BenchmarkSuite parse_suite_file(const std::string& path) {
  BenchmarkSuite suite;
  for (const auto& sec : parse_ini_file(path)) {
    if (sec.name == "suite") {
      suite.seed = to_u64(sec.values, "seed", 0);
      suite.workers = static_cast<int>(to_u64(sec.values, "workers", 1));
    } else if (sec.name == "entry") {
      suite.entries.push_back(entry_from_kv(sec.values));
    } else if (!sec.name.empty()) {
      throw std::invalid_argument("unknown suite section: [" + sec.name + "]");
    }
  }
  return suite;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  std::size_t m = 0, n = 0;
  if (!(in >> m >> n) || m == 0 || n == 0)
    throw std::invalid_argument("matrix file must start with 'm n': " + path);
  Matrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(in >> a(i, j)))
        throw std::invalid_argument("matrix file truncated: " + path);
  return a;
}

Vec read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open vector file: " + path);
  Vec v;
  double value = 0.0;
  while (in >> value) v.push_back(value);
  if (v.empty()) throw std::invalid_argument("vector file is empty: " + path);
  return v;
}

BenchmarkSuite default_suite(std::uint64_t seed) {
  auto entry = [](const std::string& label, const std::string& recipe, Variant variant,
                  SigmaMode sigma, double angle = 0.0) {
    EntryConfig e;
    e.label = label;
    e.recipe = recipe;
    e.solver.variant = variant;
    e.solver.sigma_mode = sigma;
    e.solver.lambda_schedule = [](int) { return 1.0; };
    if (angle != 0.0) e.params["angle"] = format_double(angle);
    return e;
  };

  BenchmarkSuite suite;
  suite.seed = seed;
  const double angle60 = 1.0471975511965976;
  suite.entries.push_back(entry("hs-parallel", "halfspace", Variant::classic_cq, SigmaMode::one));
  suite.entries.push_back(
      entry("hs-angled", "halfspace", Variant::classic_cq, SigmaMode::one, angle60));
  suite.entries.push_back(
      entry("hs-angled-tau", "halfspace", Variant::classic_cq, SigmaMode::tau, angle60));
  {
    EntryConfig e = entry("hs-angled-lw", "halfspace", Variant::landweber_sqne, SigmaMode::tau,
                          angle60);
    e.solver.epsilon = 0.9;
    suite.entries.push_back(e);
  }
  {
    EntryConfig e = entry("ballhalf", "ball-halfspace", Variant::classic_cq, SigmaMode::tau);
    e.n = 3;
    e.m = 2;
    suite.entries.push_back(e);
  }
  {
    EntryConfig e =
        entry("sublevel", "sublevel-slater", Variant::subgradient_cq, SigmaMode::one);
    e.n = 3;
    e.m = 2;
    e.solver.max_iter = 20000;
    suite.entries.push_back(e);
  }
  {
    EntryConfig e =
        entry("sublevel-tau", "sublevel-slater", Variant::subgradient_cq, SigmaMode::tau);
    e.n = 3;
    e.m = 2;
    e.solver.max_iter = 20000;
    suite.entries.push_back(e);
  }
  {
    EntryConfig e = entry("orthoA", "orthogonal-A", Variant::classic_cq, SigmaMode::tau);
    e.n = 3;
    e.m = 3;
    suite.entries.push_back(e);
  }
  return suite;
}

std::optional<RateBound> theoretical_rate(const GeneratedInstance& gen,
                                          const SolverConfig& config) {
  const auto& moduli = gen.moduli;
  if (!moduli.kappa1 || !moduli.kappa2) return std::nullopt;
  if (!gen.instance.s.sqne_rho || !gen.instance.t.sqne_rho) return std::nullopt;
  double rho_s = *gen.instance.s.sqne_rho;
  double rho_t = *gen.instance.t.sqne_rho;
  const LinearMap& a = *gen.instance.a;
  try {
    if (config.variant == Variant::landweber_sqne) {
      double big_delta = landweber_modulus(rho_t, moduli.delta_t, *moduli.kappa2, a);
      return rate_bound(rho_s, rho_t, moduli.delta_s, big_delta, config.epsilon,
                        *moduli.kappa1);
    }
    // cutter range: fold T through U = Id + (2 - eps)(T - Id)
    double eps = config.epsilon;
    double rho_u = (rho_t - 1.0 + eps) / (2.0 - eps);
    double delta_u = (2.0 - eps) * moduli.delta_t;
    double big_delta = landweber_modulus(rho_u, delta_u, *moduli.kappa2, a);
    return rate_bound(rho_s, rho_u, moduli.delta_s, big_delta, eps / (2.0 - eps),
                      *moduli.kappa1);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

RegularityEstimate build_regularity_estimate(const GeneratedInstance& gen, std::uint64_t seed,
                                             int samples) {
  RegularityEstimate est;
  est.center = gen.instance.solution_witness;
  est.radius = gen.moduli.radius;
  est.seed = seed;

  est.delta_op = sample_operator_modulus(gen.instance.s, est.center, est.radius, samples,
                                         mix_seed(seed, 1));
  est.delta_provenance = Provenance::sampled_estimate;

  if (gen.moduli.kappa1) {
    est.kappa_sets = *gen.moduli.kappa1;
    est.kappa_provenance = Provenance::theoretical_bound;
  } else {
    est.kappa_sets = sample_family_modulus(gen.solution_sets, est.center, est.radius, samples,
                                           mix_seed(seed, 2));
    est.kappa_provenance = Provenance::sampled_estimate;
  }

  const LinearMap& a = *gen.instance.a;
  est.rho = gen.instance.t.sqne_rho.value_or(1.0);
  est.delta_in = gen.moduli.delta_t;
  if (gen.moduli.kappa2) {
    est.kappa_in = *gen.moduli.kappa2;
  } else if (gen.set_q) {
    // sample the image-space family {im A, Fix T}
    Matrix range_complement = Matrix::identity(a.rows());
    const Matrix& u = a.left_basis();
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.rows(); ++j)
        for (std::size_t k = 0; k < u.cols(); ++k)
          range_complement(i, j) -= u(i, k) * u(j, k);
    std::vector<ConvexSetSpec> image_sets;
    image_sets.emplace_back(AffineSet{range_complement, Vec(a.rows(), 0.0)});
    image_sets.push_back(*gen.set_q);
    est.kappa_in = sample_family_modulus(image_sets, a.apply(est.center),
                                         est.radius * a.op_norm(), samples, mix_seed(seed, 3));
  } else {
    est.kappa_in = 1.0;
  }
  est.spectral_ratio = a.min_pos_sv() / a.op_norm();
  est.delta_landweber = landweber_modulus(est.rho, est.delta_in, est.kappa_in, a);
  return est;
}

EntryOutcome run_entry(const EntryConfig& entry, std::uint64_t suite_seed, std::size_t index) {
  EntryOutcome out;
  out.label = entry.label;
  out.variant = variant_name(entry.solver.variant);
  out.observed_q = kNan;
  out.theoretical_q = kNan;

  const std::uint64_t entry_seed = entry.seed.value_or(mix_seed(suite_seed, index));

  GeneratedInstance gen;
  try {
    gen = generate_instance(entry.recipe, entry.n, entry.m, entry_seed, entry.params);
  } catch (const std::invalid_argument& e) {
    out.ok = false;
    out.input_error = true;
    out.failures.push_back(std::string("input error: ") + e.what());
    return out;
  } catch (const std::exception& e) {
    out.ok = false;
    out.failures.push_back(std::string("generation audit: ") + e.what());
    return out;
  }

  if (entry.inject_witness_fault) gen.instance.solution_witness[0] += 10.0;

  try {
    gen.instance.validate(1e-10);
  } catch (const std::exception& e) {
    out.ok = false;
    out.failures.push_back(e.what());
    return out;
  }

  std::mt19937_64 rng(mix_seed(entry_seed, 0xA11CE));
  Vec x0 = add(gen.instance.solution_witness,
               sample_ball(Vec(gen.instance.a->cols(), 0.0), entry.x0_radius, rng));

  IterationTrace trace;
  try {
    trace = run(gen.instance, entry.solver, x0);
  } catch (const std::exception& e) {
    out.ok = false;
    out.failures.push_back(std::string("solver abort: ") + e.what());
    return out;
  }

  out.iterations = static_cast<int>(trace.records.size());
  out.final_dist = trace.dist_f.back();

  std::ostringstream csv;
  write_trace_csv(trace, csv);
  out.csv = csv.str();

  const Vec witnesses[] = {gen.instance.solution_witness};
  FejerAuditReport fejer = fejer_audit(trace, witnesses, trace.strengthened_coeff);
  if (fejer.worst_plain > 1e-10 || fejer.worst_strengthened > 1e-10) {
    out.ok = false;
    out.failures.push_back("fejer audit: slack " + format_double(std::max(
                               fejer.worst_plain, fejer.worst_strengthened)));
  }

  double prev = std::numeric_limits<double>::infinity();
  for (double d : trace.dist_f) {
    if (!std::isfinite(d)) continue;
    if (d > prev + 1e-10) {
      out.ok = false;
      out.failures.push_back("dist monotonicity audit: increase of " +
                             format_double(d - prev));
      break;
    }
    prev = d;
  }

  RegularityEstimate est;
  try {
    est = build_regularity_estimate(gen, mix_seed(entry_seed, 0xE57));
  } catch (const std::exception& e) {
    out.ok = false;
    out.failures.push_back(std::string("regularity estimate: ") + e.what());
    return out;
  }

  if (auto bound = theoretical_rate(gen, entry.solver)) {
    out.theoretical_q = bound->q;
    est.gamma = bound->gamma;
    est.q_rate = bound->q;
    try {
      ObservedRate rate = observed_rate(trace, 5);
      out.observed_q = rate.q_max;
      if (rate.q_max > bound->q + 1e-12) {
        out.ok = false;
        out.failures.push_back("rate bound audit: observed " + format_double(rate.q_max) +
                               " exceeds theoretical " + format_double(bound->q));
      }
    } catch (const std::exception&) {
      // too few usable iterations to measure a rate; not an audit failure
    }
    TailBoundReport tail = tail_bound_check(trace, bound->q);
    if (tail.violations > 0) {
      out.ok = false;
      out.failures.push_back("tail bound audit: worst slack " +
                             format_double(tail.worst_slack));
    }
  } else {
    try {
      out.observed_q = observed_rate(trace, 5).q_max;
    } catch (const std::exception&) {
    }
  }

  std::ostringstream rep;
  rep << "label: " << entry.label << "\n";
  rep << "variant: " << out.variant << "\n";
  rep << est.to_report();
  rep << "observed_q: " << format_double(out.observed_q) << "\n";
  out.report = rep.str();
  return out;
}

int run_suite(const BenchmarkSuite& suite, const std::string& out_dir, std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  std::vector<EntryOutcome> outcomes(suite.entries.size());
  const int workers = std::max(1, suite.workers);
  if (workers == 1 || suite.entries.size() <= 1) {
    for (std::size_t i = 0; i < suite.entries.size(); ++i)
      outcomes[i] = run_entry(suite.entries[i], suite.seed, i);
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= suite.entries.size()) return;
        outcomes[i] = run_entry(suite.entries[i], suite.seed, i);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::ofstream summary(fs::path(out_dir) / "summary.txt");
  summary << "label,variant,iterations,final_dist_F,observed_q,theoretical_q,bound_ok\n";
  bool any_audit_failure = false;
  bool any_input_error = false;
  for (const auto& out : outcomes) {
    if (!out.csv.empty()) {
      std::ofstream csv(fs::path(out_dir) / (sanitize(out.label) + ".csv"));
      csv << out.csv;
    }
    if (!out.report.empty()) {
      std::ofstream rep(fs::path(out_dir) / (sanitize(out.label) + ".report.txt"));
      rep << out.report;
    }
    summary << out.label << ',' << out.variant << ',' << out.iterations << ','
            << format_double(out.final_dist) << ',' << format_double(out.observed_q) << ','
            << format_double(out.theoretical_q) << ',' << (out.ok ? "yes" : "no") << '\n';
    for (const auto& failure : out.failures) {
      log << "FAIL " << out.label << ": " << failure << '\n';
      summary << "# FAIL " << out.label << ": " << failure << '\n';
    }
    if (!out.ok) any_audit_failure = true;
    if (out.input_error) any_input_error = true;
  }
  if (any_input_error) return 3;
  return any_audit_failure ? 2 : 0;
}

}  // namespace splitfeas
