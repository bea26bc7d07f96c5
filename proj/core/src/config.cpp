#include "gridstealth/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gridstealth/error.hpp"

namespace gridstealth {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_scalar(std::string_view token, std::string_view key) {
  token = trim(token);
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw Error(ErrorKind::config_error,
                "bad value '" + std::string(token) + "' for " + std::string(key));
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view key) {
  std::vector<T> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_scalar<T>(text.substr(0, comma), key));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

// Shortest text that parses back to the same value.
template <typename T>
std::string shortest(T value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + shortest(values[i]);
  return out;
}

std::vector<double> dense_rho_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 19; ++i) grid.push_back(0.05 * i);
  grid.push_back(0.99);
  return grid;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::utility_vs_rho: return "utility_vs_rho";
    case ExperimentKind::tradeoff: return "tradeoff";
    case ExperimentKind::training_utility: return "training_utility";
    case ExperimentKind::frobenius_gap: return "frobenius_gap";
    case ExperimentKind::detection: return "detection";
  }
  return "unknown";
}

std::vector<ExperimentKind> parse_experiments(std::string_view names) {
  std::vector<ExperimentKind> out;
  auto add = [&](ExperimentKind kind) {
    if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
  };
  while (true) {
    const auto comma = names.find(',');
    const auto name = trim(names.substr(0, comma));
    if (name == "all") {
      for (auto kind : kAllExperiments) add(kind);
    } else {
      bool known = false;
      for (auto kind : kAllExperiments) {
        if (to_string(kind) == name) {
          add(kind);
          known = true;
        }
      }
      if (!known) {
        throw Error(ErrorKind::config_error, "unknown experiment '" + std::string(name) + "'");
      }
    }
    if (comma == std::string_view::npos) break;
    names.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) { return parse_list<double>(text, "list"); }
std::vector<long> parse_integer_list(std::string_view text) { return parse_list<long>(text, "list"); }

Grids grids_for(const ExperimentConfig& config, ExperimentKind kind) {
  Grids g;
  const bool dense = kind == ExperimentKind::utility_vs_rho || kind == ExperimentKind::tradeoff;
  g.rho = config.rho_grid.value_or(dense ? dense_rho_grid() : std::vector<double>{0.1, 0.8});
  g.snr_db = config.snr_grid_db.value_or(dense ? std::vector<double>{0, 10, 20, 30}
                                               : std::vector<double>{10, 20});
  g.k = config.k_grid.value_or(std::vector<long>{29, 50, 100, 200, 500, 1000});
  g.blocks = config.block_sizes.value_or(std::vector<long>{1, 2, 4, 8});
  return g;
}

void validate(const ExperimentConfig& config) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::config_error, msg); };
  if (config.case_path.empty()) fail("no case file given");
  if (config.experiments.empty()) fail("no experiment selected");
  if (config.trials < 1) fail("trials must be >= 1");
  if (!(config.alpha_target > 0.0 && config.alpha_target < 0.5)) fail("alpha must lie in (0, 0.5)");
  if (config.mc_samples < 1000) fail("mc must be >= 1000");
  if (config.output_dir.empty()) fail("no output directory");
  if (config.rho_grid) {
    if (config.rho_grid->empty()) fail("empty rho grid");
    for (double r : *config.rho_grid) {
      if (!(r >= 0.0 && r < 1.0)) fail("rho values must lie in [0, 1)");
    }
  }
  if (config.snr_grid_db) {
    if (config.snr_grid_db->empty()) fail("empty snr grid");
    for (double s : *config.snr_grid_db) {
      if (!std::isfinite(s)) fail("snr values must be finite");
    }
  }
  if (config.k_grid) {
    if (config.k_grid->empty()) fail("empty k grid");
    for (long k : *config.k_grid) {
      if (k < 2) fail("k values must be >= 2");
    }
  }
  if (config.block_sizes) {
    if (config.block_sizes->empty()) fail("empty block size list");
    for (long b : *config.block_sizes) {
      if (b < 1) fail("block sizes must be >= 1");
    }
  }
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::config_error, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "case") {
      base.case_path = std::string(value);
    } else if (key == "experiment") {
      base.experiments = parse_experiments(value);
    } else if (key == "seed") {
      base.seed = parse_scalar<std::uint64_t>(value, key);
    } else if (key == "out") {
      base.output_dir = std::string(value);
    } else if (key == "alpha") {
      base.alpha_target = parse_scalar<double>(value, key);
    } else if (key == "trials") {
      base.trials = parse_scalar<long>(value, key);
    } else if (key == "mc") {
      base.mc_samples = parse_scalar<long>(value, key);
    } else if (key == "rho") {
      base.rho_grid = parse_list<double>(value, key);
    } else if (key == "snr") {
      base.snr_grid_db = parse_list<double>(value, key);
    } else if (key == "k") {
      base.k_grid = parse_list<long>(value, key);
    } else if (key == "blocks") {
      base.block_sizes = parse_list<long>(value, key);
    } else {
      throw Error(ErrorKind::config_error, "unknown key '" + std::string(key) + "'");
    }
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config_error, "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

std::string to_config_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "case = " << config.case_path << '\n';
  out << "experiment = ";
  for (std::size_t i = 0; i < config.experiments.size(); ++i) {
    out << (i ? "," : "") << to_string(config.experiments[i]);
  }
  out << '\n';
  out << "seed = " << config.seed << '\n';
  out << "out = " << config.output_dir << '\n';
  out << "alpha = " << shortest(config.alpha_target) << '\n';
  out << "trials = " << config.trials << '\n';
  out << "mc = " << config.mc_samples << '\n';
  if (config.rho_grid) out << "rho = " << join(*config.rho_grid) << '\n';
  if (config.snr_grid_db) out << "snr = " << join(*config.snr_grid_db) << '\n';
  if (config.k_grid) out << "k = " << join(*config.k_grid) << '\n';
  if (config.block_sizes) out << "blocks = " << join(*config.block_sizes) << '\n';
  return out.str();
}

}  // namespace gridstealth
