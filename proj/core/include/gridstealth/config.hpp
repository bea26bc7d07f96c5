#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridstealth {

enum class ExperimentKind { utility_vs_rho, tradeoff, training_utility, frobenius_gap, detection };

inline constexpr ExperimentKind kAllExperiments[] = {
    ExperimentKind::utility_vs_rho, ExperimentKind::tradeoff, ExperimentKind::training_utility,
    ExperimentKind::frobenius_gap, ExperimentKind::detection};

std::string_view to_string(ExperimentKind kind) noexcept;
/// Comma-separated experiment names, or "all".
std::vector<ExperimentKind> parse_experiments(std::string_view names);

/// Everything a batch run needs. Unset grids fall back to per-experiment
/// defaults (see grids_for).
struct ExperimentConfig {
  std::string case_path;
  std::vector<ExperimentKind> experiments;
  std::optional<std::vector<double>> rho_grid;
  std::optional<std::vector<double>> snr_grid_db;
  std::optional<std::vector<long>> k_grid;
  std::optional<std::vector<long>> block_sizes;
  long trials = 100;
  double alpha_target = 0.05;
  std::uint64_t seed = 20180415;
  std::string output_dir = "results";
  long mc_samples = 20000;
};

struct Grids {
  std::vector<double> rho;
  std::vector<double> snr_db;
  std::vector<long> k;
  std::vector<long> blocks;
};

Grids grids_for(const ExperimentConfig& config, ExperimentKind kind);

/// Checks ranges that do not depend on the case (state dimension checks happen
/// once the case is loaded). Throws config_error.
void validate(const ExperimentConfig& config);

/// Flat key/value text: one `key = value` per line, `#` starts a comment,
/// lists are comma separated. Keys: case, experiment, seed, out, alpha,
/// trials, rho, snr, k, mc, blocks. Values override those already in `base`.
ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

/// Canonical `key = value` rendering of a config (used for the run manifest).
std::string to_config_text(const ExperimentConfig& config);

std::vector<double> parse_real_list(std::string_view text);
std::vector<long> parse_integer_list(std::string_view text);

}  // namespace gridstealth
