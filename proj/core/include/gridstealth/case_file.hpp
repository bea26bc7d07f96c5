#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridstealth {

enum class BusRole { slack, pv, pq };

struct BusRecord {
  int id = 0;
  BusRole role = BusRole::pq;

  friend bool operator==(const BusRecord&, const BusRecord&) = default;
};

struct BranchRecord {
  int from_bus = 0;
  int to_bus = 0;
  double reactance = 0.0;  // per-unit
  bool in_service = true;

  friend bool operator==(const BranchRecord&, const BranchRecord&) = default;
};

/// Grid topology read from a MATPOWER-style case. Only the data needed by the
/// DC model is kept: bus ids and roles, branch endpoints, reactance and status.
struct CaseFile {
  double base_mva = 100.0;
  std::vector<BusRecord> buses;
  std::vector<BranchRecord> branches;

  int slack_bus() const;
  std::optional<std::size_t> bus_position(int id) const;
  std::size_t in_service_branch_count() const;

  friend bool operator==(const CaseFile&, const CaseFile&) = default;
};

/// Parses the subset of the MATPOWER case language used by case files:
/// `baseMVA`, `bus` and `branch` assignments (optionally prefixed, e.g.
/// `mpc.bus`), `%` comments, and arbitrary whitespace. Other assignments are
/// skipped. Throws gridstealth::Error on malformed or inconsistent input.
CaseFile parse_case(std::string_view text);

CaseFile load_case(const std::string& path);

/// Canonical case text; parse_case(to_case_text(c)) == c.
std::string to_case_text(const CaseFile& c);

/// Throws if any CaseFile invariant is violated.
void validate(const CaseFile& c);

}  // namespace gridstealth
