#include "gridstealth/case_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gridstealth/error.hpp"

namespace gridstealth {
namespace {

using Matrix = std::vector<std::vector<double>>;

std::string strip_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_quote = false;
  bool in_comment = false;
  for (char ch : text) {
    if (ch == '\n') {
      in_comment = false;
      in_quote = false;
      out.push_back(ch);
      continue;
    }
    if (in_comment) continue;
    if (ch == '\'') in_quote = !in_quote;
    if (ch == '%' && !in_quote) {
      in_comment = true;
      continue;
    }
    out.push_back(ch);
  }
  return out;
}

bool is_ident_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
}

double parse_number(std::string_view token, std::string_view section) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorKind::malformed_case,
                "non-numeric entry '" + std::string(token) + "' in " + std::string(section));
  }
  return value;
}

Matrix parse_matrix_body(std::string_view body, std::string_view section) {
  Matrix rows;
  std::vector<double> row;
  std::string token;
  auto flush_token = [&] {
    if (!token.empty()) {
      row.push_back(parse_number(token, section));
      token.clear();
    }
  };
  auto flush_row = [&] {
    flush_token();
    if (!row.empty()) rows.push_back(std::move(row));
    row.clear();
  };
  for (char ch : body) {
    if (ch == ';' || ch == '\n') {
      flush_row();
    } else if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      flush_token();
    } else {
      token.push_back(ch);
    }
  }
  flush_row();
  if (rows.empty()) {
    throw Error(ErrorKind::malformed_case, "empty " + std::string(section) + " matrix");
  }
  const auto width = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != width) {
      throw Error(ErrorKind::malformed_case,
                  "ragged rows in " + std::string(section) + " matrix");
    }
  }
  return rows;
}

struct Sections {
  std::optional<double> base_mva;
  std::optional<Matrix> bus;
  std::optional<Matrix> branch;
};

// Walks `name = rhs;` statements. Matrix right-hand sides are bracketed and may
// span lines; scalar ones end at ';' or newline.
Sections scan(const std::string& text) {
  Sections out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto skip_line = [&] {
    while (i < n && text[i] != '\n') ++i;
  };
  while (i < n) {
    if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ';') {
      ++i;
      continue;
    }
    if (!is_ident_char(text[i])) {
      skip_line();
      continue;
    }
    std::size_t start = i;
    while (i < n && is_ident_char(text[i])) ++i;
    std::string name = text.substr(start, i - start);
    if (name == "function") {
      skip_line();
      continue;
    }
    while (i < n && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i >= n || text[i] != '=') {
      skip_line();
      continue;
    }
    ++i;
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const auto dot = name.rfind('.');
    const std::string key = dot == std::string::npos ? name : name.substr(dot + 1);

    if (i < n && text[i] == '[') {
      const auto close = text.find(']', i + 1);
      if (close == std::string::npos) {
        throw Error(ErrorKind::malformed_case, "unterminated matrix for '" + name + "'");
      }
      std::string_view body(text.data() + i + 1, close - i - 1);
      i = close + 1;
      if (key == "bus") {
        out.bus = parse_matrix_body(body, "bus");
      } else if (key == "branch") {
        out.branch = parse_matrix_body(body, "branch");
      }
      continue;
    }

    std::size_t end = i;
    while (end < n && text[end] != ';' && text[end] != '\n') ++end;
    std::string value = text.substr(i, end - i);
    i = end;
    if (key == "baseMVA") {
      while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) {
        value.pop_back();
      }
      out.base_mva = parse_number(value, "baseMVA");
    }
  }
  return out;
}

int as_bus_id(double v, std::string_view what) {
  if (v < 1.0 || v != std::floor(v) || v > 1e9) {
    throw Error(ErrorKind::malformed_case, std::string(what) + " must be a positive integer");
  }
  return static_cast<int>(v);
}

BusRole role_from_code(double code, int id) {
  if (code == 3.0) return BusRole::slack;
  if (code == 2.0) return BusRole::pv;
  if (code == 1.0) return BusRole::pq;
  throw Error(ErrorKind::malformed_case,
              "bus " + std::to_string(id) + " has unsupported type code");
}

int role_code(BusRole role) {
  switch (role) {
    case BusRole::slack: return 3;
    case BusRole::pv: return 2;
    case BusRole::pq: return 1;
  }
  return 1;
}

}  // namespace

int CaseFile::slack_bus() const {
  for (const auto& b : buses) {
    if (b.role == BusRole::slack) return b.id;
  }
  throw Error(ErrorKind::slack_bus_violation, "no slack bus");
}

std::optional<std::size_t> CaseFile::bus_position(int id) const {
  for (std::size_t k = 0; k < buses.size(); ++k) {
    if (buses[k].id == id) return k;
  }
  return std::nullopt;
}

std::size_t CaseFile::in_service_branch_count() const {
  return static_cast<std::size_t>(std::count_if(
      branches.begin(), branches.end(), [](const BranchRecord& b) { return b.in_service; }));
}

void validate(const CaseFile& c) {
  if (!(c.base_mva > 0.0)) {
    throw Error(ErrorKind::malformed_case, "baseMVA must be positive");
  }
  if (c.buses.empty()) throw Error(ErrorKind::malformed_case, "no buses");
  std::set<int> ids;
  int slack_count = 0;
  for (const auto& b : c.buses) {
    if (b.id < 1) throw Error(ErrorKind::malformed_case, "bus id must be >= 1");
    if (!ids.insert(b.id).second) {
      throw Error(ErrorKind::malformed_case, "duplicate bus id " + std::to_string(b.id));
    }
    if (b.role == BusRole::slack) ++slack_count;
  }
  if (slack_count != 1) {
    throw Error(ErrorKind::slack_bus_violation,
                "expected exactly one type-3 bus, found " + std::to_string(slack_count));
  }
  for (const auto& br : c.branches) {
    for (int end : {br.from_bus, br.to_bus}) {
      if (!ids.contains(end)) {
        throw Error(ErrorKind::unknown_bus,
                    "branch references bus " + std::to_string(end));
      }
    }
    if (br.from_bus == br.to_bus) {
      throw Error(ErrorKind::degenerate_branch,
                  "self-loop at bus " + std::to_string(br.from_bus));
    }
    if (br.in_service && br.reactance == 0.0) {
      throw Error(ErrorKind::degenerate_branch,
                  "zero reactance on in-service branch " + std::to_string(br.from_bus) +
                      "-" + std::to_string(br.to_bus));
    }
  }
}

CaseFile parse_case(std::string_view text) {
  const Sections sections = scan(strip_comments(text));
  if (!sections.base_mva) throw Error(ErrorKind::malformed_case, "missing baseMVA");
  if (!sections.bus) throw Error(ErrorKind::malformed_case, "missing bus matrix");
  if (!sections.branch) throw Error(ErrorKind::malformed_case, "missing branch matrix");

  CaseFile c;
  c.base_mva = *sections.base_mva;

  if (sections.bus->front().size() < 2) {
    throw Error(ErrorKind::malformed_case, "bus matrix needs id and type columns");
  }
  for (const auto& row : *sections.bus) {
    const int id = as_bus_id(row[0], "bus id");
    c.buses.push_back({id, role_from_code(row[1], id)});
  }

  // Columns: fbus tbus r x b rateA rateB rateC ratio angle status ...
  constexpr std::size_t kStatusColumn = 10;
  if (sections.branch->front().size() < 4) {
    throw Error(ErrorKind::malformed_case, "branch matrix needs from, to, r, x columns");
  }
  for (const auto& row : *sections.branch) {
    BranchRecord br;
    br.from_bus = as_bus_id(row[0], "branch from-bus");
    br.to_bus = as_bus_id(row[1], "branch to-bus");
    br.reactance = row[3];
    br.in_service = row.size() > kStatusColumn ? row[kStatusColumn] != 0.0 : true;
    c.branches.push_back(br);
  }

  validate(c);
  return c;
}

CaseFile load_case(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io_error, "cannot open case file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_case(buffer.str());
}

std::string to_case_text(const CaseFile& c) {
  auto num = [](double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  };
  std::ostringstream out;
  out << "function mpc = gridstealth_case\n";
  out << "mpc.version = '2';\n";
  out << "mpc.baseMVA = " << num(c.base_mva) << ";\n\n";
  out << "%\tbus_i\ttype\n";
  out << "mpc.bus = [\n";
  for (const auto& b : c.buses) {
    out << '\t' << b.id << '\t' << role_code(b.role) << ";\n";
  }
  out << "];\n\n";
  out << "%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus\n";
  out << "mpc.branch = [\n";
  for (const auto& br : c.branches) {
    out << '\t' << br.from_bus << '\t' << br.to_bus << "\t0\t" << num(br.reactance)
        << "\t0\t0\t0\t0\t0\t0\t" << (br.in_service ? 1 : 0) << ";\n";
  }
  out << "];\n";
  return out.str();
}

}  // namespace gridstealth
