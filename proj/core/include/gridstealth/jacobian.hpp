#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "gridstealth/case_file.hpp"

namespace gridstealth {

/// What a row of H measures: net injection at a bus, or the from-end flow of a
/// branch.
struct MeasurementDescriptor {
  enum class Kind { injection, flow };

  Kind kind = Kind::injection;
  int bus = 0;       // injection bus, or from-bus of a flow
  int to_bus = 0;    // flow only

  static MeasurementDescriptor injection_at(int bus) { return {Kind::injection, bus, 0}; }
  static MeasurementDescriptor flow_on(int from, int to) { return {Kind::flow, from, to}; }

  std::string label() const;

  friend bool operator==(const MeasurementDescriptor&, const MeasurementDescriptor&) = default;
};

/// DC measurement Jacobian H (M x N). Columns are the phase angles of the
/// non-slack buses in case order; rows are all bus injections followed by the
/// from-end flow of every in-service branch.
struct Jacobian {
  Eigen::MatrixXd matrix;
  std::vector<MeasurementDescriptor> row_meta;
  std::vector<int> state_buses;
  int slack_bus = 0;

  Eigen::Index measurements() const { return matrix.rows(); }
  Eigen::Index states() const { return matrix.cols(); }
};

Jacobian build_jacobian(const CaseFile& c);

/// Largest |entry| of (injection rows) - (signed sum of incident flow rows).
/// Zero up to round-off for a Jacobian produced by build_jacobian.
double injection_flow_residual(const Jacobian& h);

/// Numerical rank via column-pivoted QR.
Eigen::Index numerical_rank(const Eigen::MatrixXd& m);

/// Debug export: header "measurement,theta_<bus>,..." then one row per
/// measurement labelled "inj:<bus>" or "flow:<from>-<to>".
void write_jacobian_csv(const Jacobian& h, std::ostream& out);

}  // namespace gridstealth
