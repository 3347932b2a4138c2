#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "fracture/report.hpp"
#include "fracture/statistics.hpp"

namespace fracture {

/// JSON number, or null for NaN and infinities (unbounded sides).
nlohmann::json json_number(double v);

nlohmann::json to_json(const BoundsEntry& e);
nlohmann::json to_json(const Estimate& e);

/// One compact JSON object per line.
void write_jsonl(std::ostream& os, const std::vector<nlohmann::json>& records);

/// Flattens nested objects into dotted column names; the header is the union
/// of keys in first-seen order and missing cells are left empty.
void write_csv(std::ostream& os, const std::vector<nlohmann::json>& records);

}  // namespace fracture
