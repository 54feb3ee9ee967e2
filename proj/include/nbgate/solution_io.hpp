#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nbgate/design.hpp"
#include "nbgate/format.hpp"
#include "nbgate/sequence.hpp"

namespace nbgate {

namespace detail {

inline std::string json_angle_array(const std::vector<double>& radians) {
  std::string out = "[";
  for (std::size_t i = 0; i < radians.size(); ++i) {
    if (i) out += ", ";
    out += format_real(radians[i] / pi);
  }
  out += "]";
  return out;
}

}  // namespace detail

// Solution document: a JSON array with one object per record, angles in
// units of pi at 12 significant digits. Written by hand so field order and
// number formatting stay byte-stable run to run.
inline std::string solutions_to_json(const std::vector<SolutionRecord>& records) {
  if (records.empty()) return "[]\n";
  std::string out = "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SolutionRecord& rec = records[i];
    out += "  {\n";
    out += "    \"n_segments\": " + std::to_string(rec.spec.n_segments) + ",\n";
    out += "    \"theta_target_pi\": " + format_real(rec.spec.target_angle / pi) + ",\n";
    out += "    \"order\": " + std::to_string(rec.spec.order) + ",\n";
    out += "    \"phases_pi\": " + detail::json_angle_array(rec.phases) + ",\n";
    out += "    \"residual_norm\": " + format_real(rec.residual_norm) + ",\n";
    out += "    \"canonical_phases_pi\": " + detail::json_angle_array(rec.canonical_phases) + "\n";
    out += (i + 1 < records.size()) ? "  },\n" : "  }\n";
  }
  out += "]\n";
  return out;
}

inline std::vector<SolutionRecord> solutions_from_json(std::string_view text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_array()) throw std::invalid_argument("solution document must be an array");
  std::vector<SolutionRecord> records;
  records.reserve(doc.size());
  for (const nlohmann::json& item : doc) {
    SolutionRecord rec;
    rec.spec.n_segments = item.at("n_segments").get<int>();
    rec.spec.target_angle = item.at("theta_target_pi").get<double>() * pi;
    rec.spec.order = item.at("order").get<int>();
    for (const nlohmann::json& v : item.at("phases_pi"))
      rec.phases.push_back(v.get<double>() * pi);
    rec.residual_norm = item.at("residual_norm").get<double>();
    for (const nlohmann::json& v : item.at("canonical_phases_pi"))
      rec.canonical_phases.push_back(v.get<double>() * pi);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace nbgate
