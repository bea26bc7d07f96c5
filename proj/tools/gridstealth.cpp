// gridstealth: batch driver for stealth-attack experiments on DC grid models.
//
//   gridstealth run --experiment <name|all> --case <file.m> [flags]
//   gridstealth validate --case <file.m> [--export-jacobian h.csv]
//
// Exit status: 0 success, 1 configuration/input error, 2 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

#include "gridstealth/case_file.hpp"
#include "gridstealth/config.hpp"
#include "gridstealth/error.hpp"
#include "gridstealth/experiments.hpp"
#include "gridstealth/jacobian.hpp"
#include "gridstealth/threads.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int exit_code_for(const gridstealth::Error& e) {
  return gridstealth::classify(e.kind()) == gridstealth::ErrorClass::numerical ? kExitNumerical
                                                                               : kExitConfig;
}

int validate_case(const std::string& path, const std::string& export_path) {
  const auto grid = gridstealth::load_case(path);
  const auto h = gridstealth::build_jacobian(grid);
  const auto rank = gridstealth::numerical_rank(h.matrix);
  const auto residual = gridstealth::injection_flow_residual(h);

  std::cout << "case            " << path << '\n'
            << "base MVA        " << grid.base_mva << '\n'
            << "buses           " << grid.buses.size() << '\n'
            << "branches        " << grid.branches.size() << " (" << grid.in_service_branch_count()
            << " in service)\n"
            << "slack bus       " << h.slack_bus << '\n'
            << "H shape         " << h.measurements() << " x " << h.states() << '\n'
            << "rank(H)         " << rank << (rank == h.states() ? " (full column rank)" : " (DEFICIENT)")
            << '\n'
            << "inj/flow resid  " << std::scientific << std::setprecision(3) << residual << '\n';

  if (!export_path.empty()) {
    std::ofstream out(export_path);
    if (!out) throw gridstealth::Error(gridstealth::ErrorKind::io_error, "cannot write " + export_path);
    gridstealth::write_jacobian_csv(h, out);
    std::cout << "H written to    " << export_path << '\n';
  }
  return rank == h.states() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-theoretic stealth attacks on DC state estimation"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run one experiment (or all) and write CSV datasets");
  std::string config_file, case_path, experiment, out_dir, rho, snr, k, blocks;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  long trials = 0, mc = 0;
  unsigned threads = 0;
  run->add_option("--config", config_file, "Key/value config file; flags override it");
  run->add_option("--experiment", experiment,
                  "utility_vs_rho, tradeoff, training_utility, frobenius_gap, detection or all");
  run->add_option("--case", case_path, "MATPOWER-style case file");
  run->add_option("--seed", seed, "Base random seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--alpha", alpha, "Target false-alarm rate for detection");
  run->add_option("--trials", trials, "Sample-covariance realisations per grid point");
  run->add_option("--mc", mc, "Monte Carlo draws per detection estimate");
  run->add_option("--rho", rho, "Comma list of correlation strengths");
  run->add_option("--snr", snr, "Comma list of SNR values in dB");
  run->add_option("--k", k, "Comma list of training-set sizes");
  run->add_option("--blocks", blocks, "Comma list of detection block sizes");
  run->add_option("--threads", threads, "Worker threads (0 = all cores); output is unaffected");

  // validate
  auto* check = app.add_subcommand("validate", "Parse a case and report Jacobian sanity checks");
  std::string validate_case_path, export_path;
  check->add_option("--case", validate_case_path, "MATPOWER-style case file")->required();
  check->add_option("--export-jacobian", export_path, "Write H as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*check) return validate_case(validate_case_path, export_path);

    gridstealth::ExperimentConfig config;
    if (!config_file.empty()) config = gridstealth::load_config_file(config_file, config);
    if (run->count("--case")) config.case_path = case_path;
    if (run->count("--experiment")) config.experiments = gridstealth::parse_experiments(experiment);
    if (run->count("--seed")) config.seed = seed;
    if (run->count("--out")) config.output_dir = out_dir;
    if (run->count("--alpha")) config.alpha_target = alpha;
    if (run->count("--trials")) config.trials = trials;
    if (run->count("--mc")) config.mc_samples = mc;
    if (run->count("--rho")) config.rho_grid = gridstealth::parse_real_list(rho);
    if (run->count("--snr")) config.snr_grid_db = gridstealth::parse_real_list(snr);
    if (run->count("--k")) config.k_grid = gridstealth::parse_integer_list(k);
    if (run->count("--blocks")) config.block_sizes = gridstealth::parse_integer_list(blocks);

    gridstealth::set_worker_threads(threads);
    const auto datasets = gridstealth::run_batch(config);
    for (const auto& d : datasets) {
      std::cout << "wrote " << config.output_dir << '/' << gridstealth::to_string(d.kind)
                << ".csv (" << d.rows.size() << " rows)\n";
    }
    return 0;
  } catch (const gridstealth::Error& e) {
    std::cerr << "gridstealth: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "gridstealth: " << e.what() << '\n';
    return kExitNumerical;
  }
}
