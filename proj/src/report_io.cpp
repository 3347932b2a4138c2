#include "fracture/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>

namespace fracture {

namespace {

void flatten(const nlohmann::json& j, const std::string& prefix,
             std::vector<std::pair<std::string, const nlohmann::json*>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  out.emplace_back(prefix, &j);
}

std::string csv_cell(const nlohmann::json& j) {
  if (j.is_null()) return "";
  std::string s = j.is_string() ? j.get<std::string>() : j.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json to_json(const BoundsEntry& e) {
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [k, v] : e.inputs) inputs[k] = json_number(v);
  nlohmann::json j = {{"name", e.name},
                      {"lower", json_number(e.lower)},
                      {"value", json_number(e.value)},
                      {"se", json_number(e.se)},
                      {"upper", json_number(e.upper)},
                      {"tolerance", json_number(e.tolerance)},
                      {"pass", e.pass},
                      {"margin", json_number(e.margin)},
                      {"informational", e.informational},
                      {"inputs", inputs}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

nlohmann::json to_json(const Estimate& e) {
  return {{"mean", json_number(e.mean)}, {"std_error", json_number(e.std_error)}, {"n", e.n}, {"seed", e.seed}};
}

void write_jsonl(std::ostream& os, const std::vector<nlohmann::json>& records) {
  for (const auto& r : records) os << r.dump() << '\n';
}

void write_csv(std::ostream& os, const std::vector<nlohmann::json>& records) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::pair<std::string, const nlohmann::json*>>> rows;
  for (const auto& r : records) {
    auto& row = rows.emplace_back();
    flatten(r, "", row);
    for (const auto& [k, v] : row)
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
  }
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << csv_cell(columns[c]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      for (const auto& [k, v] : row)
        if (k == columns[c]) {
          os << csv_cell(*v);
          break;
        }
    }
    os << '\n';
  }
}

}  // namespace fracture
