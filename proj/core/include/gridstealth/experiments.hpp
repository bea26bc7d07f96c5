#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gridstealth/case_file.hpp"
#include "gridstealth/config.hpp"
#include "gridstealth/jacobian.hpp"
#include "gridstealth/observation_model.hpp"

namespace gridstealth {

std::string_view library_version() noexcept;

/// A case loaded for experiments, with its Jacobian and a checksum of the
/// file bytes (64-bit FNV-1a).
struct LoadedCase {
  std::string path;
  CaseFile grid;
  Jacobian jacobian;
  std::uint64_t checksum = 0;
};

LoadedCase load_experiment_case(const std::string& path);
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Toeplitz(rho) state prior with the noise variance that puts the model at
/// `snr_db`.
ObservationModel make_model(const Jacobian& h, double rho, double snr_db);

using Cell = std::variant<std::int64_t, double, std::string>;

struct SweepRow {
  std::vector<Cell> cells;
};

/// One experiment's output table. The first `key_columns` columns identify a
/// row; rows are kept sorted by them.
struct Dataset {
  ExperimentKind kind{};
  std::vector<std::string> columns;
  std::size_t key_columns = 0;
  std::vector<SweepRow> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
  std::string text(std::size_t row, std::string_view name) const;
};

/// Optimal-attack utility per (snr, rho); `is_max` flags the rho with the
/// largest utility at each SNR.
Dataset run_utility_sweep(const ExperimentConfig& config, const LoadedCase& loaded);
/// Mutual information and KL terms of the optimal attack per (snr, rho).
Dataset run_tradeoff_sweep(const ExperimentConfig& config, const LoadedCase& loaded);
/// Mean utility of sample-covariance attacks per (snr, rho, k) against the
/// exact-statistics baseline.
Dataset run_training_sweep(const ExperimentConfig& config, const LoadedCase& loaded);
/// Mean normalised Frobenius gap between sample and exact attacks per (rho, k).
Dataset run_frobenius_sweep(const ExperimentConfig& config, const LoadedCase& loaded);
/// Block-LRT error rates and empirical error exponents per (snr, rho, attack,
/// block size), including a zero-attack control.
Dataset run_detection_experiment(const ExperimentConfig& config, const LoadedCase& loaded);

Dataset run_experiment(ExperimentKind kind, const ExperimentConfig& config,
                       const LoadedCase& loaded);

/// Header line then rows; reals use 12 significant digits.
void write_csv(const Dataset& data, std::ostream& out);

/// Runs every configured experiment, writes `<experiment>.csv` files and
/// `manifest.txt` into config.output_dir, and returns the datasets.
std::vector<Dataset> run_batch(const ExperimentConfig& config);

}  // namespace gridstealth
