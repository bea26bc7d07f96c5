#include "gridstealth/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gridstealth/attack.hpp"
#include "gridstealth/covariance.hpp"
#include "gridstealth/detection.hpp"
#include "gridstealth/error.hpp"
#include "gridstealth/random.hpp"
#include "parallel.hpp"

#ifndef GRIDSTEALTH_VERSION_STRING
#define GRIDSTEALTH_VERSION_STRING "0.0.0"
#endif

namespace gridstealth {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t experiment_seed(const ExperimentConfig& config, ExperimentKind kind) {
  return derive_seed(config.seed, static_cast<std::uint64_t>(kind));
}

void require_k_at_least_state_dim(const std::vector<long>& ks, const LoadedCase& loaded) {
  const auto n = loaded.jacobian.states();
  for (long k : ks) {
    if (k < n) {
      throw Error(ErrorKind::config_error, "k = " + std::to_string(k) +
                                               " is below the state dimension " +
                                               std::to_string(n));
    }
  }
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

void sort_rows(Dataset& d) {
  std::stable_sort(d.rows.begin(), d.rows.end(), [&](const SweepRow& a, const SweepRow& b) {
    for (std::size_t c = 0; c < d.key_columns; ++c) {
      if (a.cells[c] < b.cells[c]) return true;
      if (b.cells[c] < a.cells[c]) return false;
    }
    return false;
  });
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  return std::get<std::string>(cell);
}

}  // namespace

std::string_view library_version() noexcept { return GRIDSTEALTH_VERSION_STRING; }

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

LoadedCase load_experiment_case(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::config_error, "cannot open case file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  LoadedCase out;
  out.path = path;
  out.grid = parse_case(text);
  out.jacobian = build_jacobian(out.grid);
  out.checksum = fnv1a64(text);
  return out;
}

ObservationModel make_model(const Jacobian& h, double rho, double snr_db) {
  auto prior = toeplitz_covariance(h.states(), rho);
  const double noise = noise_variance_for_snr(h, prior, snr_db);
  return ObservationModel(h, std::move(prior), noise);
}

std::size_t Dataset::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw Error(ErrorKind::shape_error, "no column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - columns.begin());
}

double Dataset::number(std::size_t row, std::string_view name) const {
  const auto& cell = rows.at(row).cells.at(column(name));
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  throw Error(ErrorKind::shape_error, "column '" + std::string(name) + "' is not numeric");
}

std::string Dataset::text(std::size_t row, std::string_view name) const {
  return format_cell(rows.at(row).cells.at(column(name)));
}

Dataset run_utility_sweep(const ExperimentConfig& config, const LoadedCase& loaded) {
  const auto grids = grids_for(config, ExperimentKind::utility_vs_rho);
  Dataset d;
  d.kind = ExperimentKind::utility_vs_rho;
  d.columns = {"snr_db",  "rho",    "sigma_sq",         "utility_nats",
               "mi_nats", "kl_nats", "closed_form_nats", "is_max"};
  d.key_columns = 2;
  for (double snr : grids.snr_db) {
    std::vector<SweepRow> block;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (double rho : grids.rho) {
      const auto model = make_model(loaded.jacobian, rho, snr);
      const auto u = stealth_utility(model, optimal_attack(model));
      if (u.total > best) {
        best = u.total;
        best_index = block.size();
      }
      block.push_back({{snr, rho, model.sigma_sq(), u.total, u.mutual_information,
                        u.kl_divergence, optimal_utility_closed_form(model), std::int64_t{0}}});
    }
    block[best_index].cells.back() = std::int64_t{1};
    d.rows.insert(d.rows.end(), block.begin(), block.end());
  }
  sort_rows(d);
  return d;
}

Dataset run_tradeoff_sweep(const ExperimentConfig& config, const LoadedCase& loaded) {
  const auto grids = grids_for(config, ExperimentKind::tradeoff);
  Dataset d;
  d.kind = ExperimentKind::tradeoff;
  d.columns = {"snr_db", "rho", "mi_nats", "kl_nats"};
  d.key_columns = 2;
  for (double snr : grids.snr_db) {
    for (double rho : grids.rho) {
      const auto model = make_model(loaded.jacobian, rho, snr);
      const auto u = stealth_utility(model, optimal_attack(model));
      d.rows.push_back({{snr, rho, u.mutual_information, u.kl_divergence}});
    }
  }
  sort_rows(d);
  return d;
}

Dataset run_training_sweep(const ExperimentConfig& config, const LoadedCase& loaded) {
  const auto grids = grids_for(config, ExperimentKind::training_utility);
  require_k_at_least_state_dim(grids.k, loaded);
  const auto base_seed = experiment_seed(config, ExperimentKind::training_utility);
  Dataset d;
  d.kind = ExperimentKind::training_utility;
  d.columns = {"snr_db",          "rho",
               "k",               "trials",
               "mean_utility_nats", "sd_utility_nats",
               "min_utility_nats",  "baseline_utility_nats",
               "relative_excess"};
  d.key_columns = 3;
  std::uint64_t point = 0;
  for (double snr : grids.snr_db) {
    for (double rho : grids.rho) {
      const auto model = make_model(loaded.jacobian, rho, snr);
      const double baseline = stealth_utility(model, optimal_attack(model)).total;
      for (long k : grids.k) {
        const auto mc = conditional_divergence_mc(model, k, static_cast<std::size_t>(config.trials),
                                                  derive_seed(base_seed, point++));
        const double lowest = *std::min_element(mc.per_trial.begin(), mc.per_trial.end());
        d.rows.push_back({{snr, rho, std::int64_t{k}, std::int64_t{config.trials}, mc.mean,
                           sd_of(mc.per_trial), lowest, baseline,
                           (mc.mean - baseline) / baseline}});
      }
    }
  }
  sort_rows(d);
  return d;
}

Dataset run_frobenius_sweep(const ExperimentConfig& config, const LoadedCase& loaded) {
  const auto grids = grids_for(config, ExperimentKind::frobenius_gap);
  require_k_at_least_state_dim(grids.k, loaded);
  const auto base_seed = experiment_seed(config, ExperimentKind::frobenius_gap);
  const auto& h = loaded.jacobian.matrix;
  Dataset d;
  d.kind = ExperimentKind::frobenius_gap;
  d.columns = {"rho", "k", "trials", "frobenius_gap", "sd_frobenius_gap"};
  d.key_columns = 2;
  std::uint64_t point = 0;
  for (double rho : grids.rho) {
    const auto prior = toeplitz_covariance(h.cols(), rho);
    const AttackCovariance reference{project_to_measurements(h, prior),
                                     {AttackProvenance::Kind::optimal, 0, 0}};
    for (long k : grids.k) {
      const auto point_seed = derive_seed(base_seed, point++);
      std::vector<double> gaps(static_cast<std::size_t>(config.trials));
      detail::parallel_for(gaps.size(), [&](std::size_t t) {
        const auto seed = derive_seed(point_seed, t);
        const auto s = sample_covariance(sample_gaussian(prior, k, seed));
        const AttackCovariance estimate{project_to_measurements(h, s),
                                        {AttackProvenance::Kind::from_samples, k, seed}};
        gaps[t] = normalized_frobenius_gap(reference, estimate);
      });
      d.rows.push_back({{rho, std::int64_t{k}, std::int64_t{config.trials}, mean_of(gaps),
                         sd_of(gaps)}});
    }
  }
  sort_rows(d);
  return d;
}

Dataset run_detection_experiment(const ExperimentConfig& config, const LoadedCase& loaded) {
  const auto grids = grids_for(config, ExperimentKind::detection);
  const auto base_seed = experiment_seed(config, ExperimentKind::detection);
  const auto n_mc = static_cast<std::size_t>(config.mc_samples);
  Dataset d;
  d.kind = ExperimentKind::detection;
  d.columns = {"snr_db",   "rho",      "attack",       "block_size",
               "alpha_hat", "beta_hat", "exponent_hat", "kl_nats"};
  d.key_columns = 4;
  std::uint64_t point = 0;
  for (double snr : grids.snr_db) {
    for (double rho : grids.rho) {
      const auto model = make_model(loaded.jacobian, rho, snr);
      const AttackCovariance none = AttackCovariance::custom(
          CovarianceMatrix::zero(model.measurements()));
      for (const auto& [name, attack] :
           {std::pair<std::string, AttackCovariance>{"none", none},
            std::pair<std::string, AttackCovariance>{"optimal", optimal_attack(model)}}) {
        const auto detector = LrtDetector::for_attack(model, attack);
        const double divergence = kl_gaussian(detector.attacked(), detector.clean());
        for (long block : grids.blocks) {
          const auto seed = derive_seed(base_seed, point++);
          const auto n = static_cast<std::size_t>(block);
          // threshold from one clean draw, error rates from fresh draws
          auto calibration =
              lrt_statistics(detector, Hypothesis::clean, n_mc, derive_seed(seed, 0), n);
          const auto idx = std::min(
              n_mc - 1, static_cast<std::size_t>(std::floor((1.0 - config.alpha_target) *
                                                            static_cast<double>(n_mc))));
          std::nth_element(calibration.begin(),
                           calibration.begin() + static_cast<std::ptrdiff_t>(idx),
                           calibration.end());
          const double log_tau = calibration[idx];
          const auto rates = error_rates_from_statistics(
              lrt_statistics(detector, Hypothesis::clean, n_mc, derive_seed(seed, 1), n),
              lrt_statistics(detector, Hypothesis::attacked, n_mc, derive_seed(seed, 2), n),
              log_tau);
          double exponent = kNaN;
          try {
            exponent = stein_exponent(model, attack, n, config.alpha_target, n_mc,
                                      derive_seed(seed, 3))
                           .exponent_hat;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::insufficient_resolution) throw;
          }
          d.rows.push_back({{snr, rho, name, std::int64_t{block}, rates.alpha, rates.beta,
                             exponent, divergence}});
        }
      }
    }
  }
  sort_rows(d);
  return d;
}

Dataset run_experiment(ExperimentKind kind, const ExperimentConfig& config,
                       const LoadedCase& loaded) {
  switch (kind) {
    case ExperimentKind::utility_vs_rho: return run_utility_sweep(config, loaded);
    case ExperimentKind::tradeoff: return run_tradeoff_sweep(config, loaded);
    case ExperimentKind::training_utility: return run_training_sweep(config, loaded);
    case ExperimentKind::frobenius_gap: return run_frobenius_sweep(config, loaded);
    case ExperimentKind::detection: return run_detection_experiment(config, loaded);
  }
  throw Error(ErrorKind::config_error, "unknown experiment");
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t c = 0; c < data.columns.size(); ++c) out << (c ? "," : "") << data.columns[c];
  out << '\n';
  for (const auto& row : data.rows) {
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      out << (c ? "," : "") << format_cell(row.cells[c]);
    }
    out << '\n';
  }
}

std::vector<Dataset> run_batch(const ExperimentConfig& config) {
  validate(config);
  const auto loaded = load_experiment_case(config.case_path);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error(ErrorKind::io_error, "cannot create '" + config.output_dir + "': " + ec.message());
  }

  std::vector<Dataset> out;
  for (auto kind : config.experiments) {
    out.push_back(run_experiment(kind, config, loaded));
    const auto path = fs::path(config.output_dir) / (std::string(to_string(kind)) + ".csv");
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::io_error, "cannot write '" + path.string() + "'");
    write_csv(out.back(), file);
  }

  const auto manifest_path = fs::path(config.output_dir) / "manifest.txt";
  std::ofstream manifest(manifest_path, std::ios::binary);
  if (!manifest) throw Error(ErrorKind::io_error, "cannot write '" + manifest_path.string() + "'");
  std::ostringstream checksum;
  checksum << std::hex << std::setw(16) << std::setfill('0') << loaded.checksum;
  manifest << "# gridstealth run manifest\n";
  manifest << "library_version = " << library_version() << '\n';
  manifest << "case_fnv1a64 = " << checksum.str() << '\n';
  manifest << "buses = " << loaded.grid.buses.size() << '\n';
  manifest << "measurements = " << loaded.jacobian.measurements() << '\n';
  manifest << "states = " << loaded.jacobian.states() << '\n';
  manifest << to_config_text(config);
  return out;
}

}  // namespace gridstealth
