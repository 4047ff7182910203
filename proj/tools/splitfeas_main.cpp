#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "splitfeas/harness.hpp"

namespace {

using namespace splitfeas;

int cmd_run(const std::string& suite_path, const std::string& out_dir, int workers,
            std::optional<std::uint64_t> seed) {
  BenchmarkSuite suite = parse_suite_file(suite_path);
  if (workers > 0) suite.workers = workers;
  if (seed) suite.seed = *seed;
  return run_suite(suite, out_dir, std::cout);
}

int cmd_solve(const std::string& config_path, const std::string& x0_path,
              const std::string& out_path) {
  EntryConfig entry = parse_config_file(config_path);
  std::uint64_t seed = entry.seed.value_or(0);
  GeneratedInstance gen = generate_instance(entry.recipe, entry.n, entry.m, seed, entry.params);

  Vec x0;
  if (!x0_path.empty()) {
    x0 = read_vector_file(x0_path);
    if (x0.size() != gen.instance.a->cols())
      throw std::invalid_argument("x0 dimension does not match the instance");
  } else {
    std::mt19937_64 rng(mix_seed(seed, 0xA11CE));
    x0 = add(gen.instance.solution_witness,
             sample_ball(Vec(gen.instance.a->cols(), 0.0), entry.x0_radius, rng));
  }

  IterationTrace trace;
  try {
    trace = run(gen.instance, entry.solver, x0);
  } catch (const std::runtime_error& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return 2;
  }

  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  write_trace_csv(trace, out);

  const Vec witnesses[] = {gen.instance.solution_witness};
  FejerAuditReport audit = fejer_audit(trace, witnesses, trace.strengthened_coeff);
  std::cout << "iterations: " << trace.records.size() << "\n"
            << "converged: " << (trace.converged ? "yes" : "no") << "\n"
            << "final_dist_F: " << format_double(trace.dist_f.back()) << "\n"
            << "fejer_worst_slack: " << format_double(audit.worst_plain) << "\n";
  if (audit.worst_plain > 1e-10 || audit.worst_strengthened > 1e-10) {
    std::cerr << "fejer audit failed\n";
    return 2;
  }
  return 0;
}

int cmd_spectra(const std::string& matrix_path) {
  LinearMap map(read_matrix_file(matrix_path));
  ClosedRangeReport rep = closed_range_identity_check(map);
  std::cout << "rows: " << map.rows() << "\n"
            << "cols: " << map.cols() << "\n"
            << "rank: " << map.rank() << "\n"
            << "op_norm: " << format_double(map.op_norm()) << "\n"
            << "min_pos_sv: " << format_double(map.min_pos_sv()) << "\n"
            << "closed_range_a: " << format_double(rep.a) << "\n"
            << "closed_range_a_star: " << format_double(rep.a_star) << "\n"
            << "closed_range_sqrt_aat: " << format_double(rep.sqrt_aat) << "\n"
            << "closed_range_sqrt_ata: " << format_double(rep.sqrt_ata) << "\n"
            << "closed_range_max_rel_dev: " << format_double(rep.max_rel_dev) << "\n";
  return 0;
}

int cmd_certify(const std::string& config_path) {
  EntryConfig entry = parse_config_file(config_path);
  std::uint64_t seed = entry.seed.value_or(0);
  GeneratedInstance gen = generate_instance(entry.recipe, entry.n, entry.m, seed, entry.params);
  RegularityEstimate est = build_regularity_estimate(gen, mix_seed(seed, 0xE57));
  if (auto bound = theoretical_rate(gen, entry.solver)) {
    est.gamma = bound->gamma;
    est.q_rate = bound->q;
  }
  std::cout << "label: " << entry.label << "\n" << est.to_report();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"split convex feasibility solver and benchmark harness"};
  app.require_subcommand(1);

  std::string suite_path, out_dir, config_path, x0_path, out_path, matrix_path;
  int workers = 0;
  std::optional<std::uint64_t> seed;

  auto* run_cmd = app.add_subcommand("run", "run a benchmark suite");
  run_cmd->add_option("--suite", suite_path, "suite file")->required();
  run_cmd->add_option("--out", out_dir, "output directory")->required();
  run_cmd->add_option("--workers", workers, "concurrent entries");
  run_cmd->add_option("--seed", seed, "override the suite seed");

  auto* solve_cmd = app.add_subcommand("solve", "solve one configured instance");
  solve_cmd->add_option("--config", config_path, "instance + solver config")->required();
  solve_cmd->add_option("--x0", x0_path, "starting point file (one decimal per line)");
  solve_cmd->add_option("--out", out_path, "trace CSV path")->required();

  auto* spectra_cmd = app.add_subcommand("spectra", "spectral constants of a matrix");
  spectra_cmd->add_option("--matrix", matrix_path, "matrix file")->required();

  auto* certify_cmd = app.add_subcommand("certify", "regularity report for an instance");
  certify_cmd->add_option("--config", config_path, "instance config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(suite_path, out_dir, workers, seed);
    if (solve_cmd->parsed()) return cmd_solve(config_path, x0_path, out_path);
    if (spectra_cmd->parsed()) return cmd_spectra(matrix_path);
    if (certify_cmd->parsed()) return cmd_certify(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
