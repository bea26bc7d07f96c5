#include "gridstealth/jacobian.hpp"

#include <iomanip>
#include <ostream>
#include <queue>

#include "gridstealth/error.hpp"

namespace gridstealth {
namespace {

bool connected(const CaseFile& c) {
  const auto n = c.buses.size();
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    const auto f = *c.bus_position(br.from_bus);
    const auto t = *c.bus_position(br.to_bus);
    adjacency[f].push_back(t);
    adjacency[t].push_back(f);
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto u = frontier.front();
    frontier.pop();
    for (auto v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

}  // namespace

std::string MeasurementDescriptor::label() const {
  if (kind == Kind::injection) return "inj:" + std::to_string(bus);
  return "flow:" + std::to_string(bus) + "-" + std::to_string(to_bus);
}

Jacobian build_jacobian(const CaseFile& c) {
  validate(c);
  const auto n_bus = static_cast<Eigen::Index>(c.buses.size());
  if (n_bus < 2) throw Error(ErrorKind::degenerate_system, "a single bus has no state");
  if (!connected(c)) {
    throw Error(ErrorKind::islanded_network, "in-service branches do not connect every bus");
  }

  Jacobian h;
  h.slack_bus = c.slack_bus();
  const auto slack_pos = static_cast<Eigen::Index>(*c.bus_position(h.slack_bus));

  // column of each bus in the reduced state vector, -1 for the slack
  std::vector<Eigen::Index> column(c.buses.size(), -1);
  for (Eigen::Index k = 0, col = 0; k < n_bus; ++k) {
    if (k == slack_pos) continue;
    column[k] = col++;
    h.state_buses.push_back(c.buses[k].id);
  }

  const auto n_flow = static_cast<Eigen::Index>(c.in_service_branch_count());
  h.matrix = Eigen::MatrixXd::Zero(n_bus + n_flow, n_bus - 1);
  for (const auto& b : c.buses) h.row_meta.push_back(MeasurementDescriptor::injection_at(b.id));

  auto add = [&](Eigen::Index row, Eigen::Index bus_pos, double v) {
    if (column[bus_pos] >= 0) h.matrix(row, column[bus_pos]) += v;
  };

  Eigen::Index flow_row = n_bus;
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    const auto f = static_cast<Eigen::Index>(*c.bus_position(br.from_bus));
    const auto t = static_cast<Eigen::Index>(*c.bus_position(br.to_bus));
    const double b = 1.0 / br.reactance;
    // bus susceptance matrix B
    add(f, f, b);
    add(t, t, b);
    add(f, t, -b);
    add(t, f, -b);
    // from-end flow (theta_f - theta_t) / x
    add(flow_row, f, b);
    add(flow_row, t, -b);
    h.row_meta.push_back(MeasurementDescriptor::flow_on(br.from_bus, br.to_bus));
    ++flow_row;
  }
  return h;
}

double injection_flow_residual(const Jacobian& h) {
  Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(h.matrix.rows(), h.matrix.cols());
  auto injection_row = [&](int bus) -> Eigen::Index {
    for (std::size_t r = 0; r < h.row_meta.size(); ++r) {
      const auto& m = h.row_meta[r];
      if (m.kind == MeasurementDescriptor::Kind::injection && m.bus == bus) {
        return static_cast<Eigen::Index>(r);
      }
    }
    throw Error(ErrorKind::unknown_bus, "no injection row for bus " + std::to_string(bus));
  };
  Eigen::Index injections = 0;
  for (std::size_t r = 0; r < h.row_meta.size(); ++r) {
    const auto& m = h.row_meta[r];
    if (m.kind == MeasurementDescriptor::Kind::injection) {
      ++injections;
      continue;
    }
    const auto row = static_cast<Eigen::Index>(r);
    rebuilt.row(injection_row(m.bus)) += h.matrix.row(row);
    rebuilt.row(injection_row(m.to_bus)) -= h.matrix.row(row);
  }
  return (h.matrix.topRows(injections) - rebuilt.topRows(injections)).cwiseAbs().maxCoeff();
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.rank();
}

void write_jacobian_csv(const Jacobian& h, std::ostream& out) {
  out << "measurement";
  for (int bus : h.state_buses) out << ",theta_" << bus;
  out << '\n';
  const auto old_precision = out.precision(17);
  for (Eigen::Index r = 0; r < h.matrix.rows(); ++r) {
    out << h.row_meta[static_cast<std::size_t>(r)].label();
    for (Eigen::Index col = 0; col < h.matrix.cols(); ++col) out << ',' << h.matrix(r, col);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace gridstealth
