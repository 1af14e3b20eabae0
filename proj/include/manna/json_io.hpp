#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "manna/core.hpp"

namespace manna {

namespace detail {

// JSON numbers are accepted only when they are integers; non-integer numeric
// literals go through the double parser and would lose exactness, so decimals
// must be quoted strings.
inline Rat value_from_json(const nlohmann::json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
  if (j.is_number_unsigned()) return Rat(Int(j.get<unsigned long long>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  require(!j.is_number_float(), Errc::bad_value,
          where + ": non-integer JSON numbers are inexact; quote the value as a string");
  fail(Errc::bad_value, where + ": expected an integer or a rational string");
}

}  // namespace detail

inline Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::bad_json, std::string("malformed JSON: ") + e.what());
  }
  require(j.is_object(), Errc::bad_json, "instance must be a JSON object");
  require(j.contains("agents"), Errc::bad_json, "missing field 'agents'");
  require(j.contains("items"), Errc::bad_json, "missing field 'items'");
  require(j.contains("values"), Errc::bad_json, "missing field 'values'");
  require(j["agents"].is_number_integer(), Errc::bad_value, "field 'agents': expected an integer");
  Instance inst;
  inst.n = j["agents"].get<int>();
  require(j["items"].is_array(), Errc::bad_value, "field 'items': expected an array");
  for (const auto& it : j["items"]) {
    require(it.is_string(), Errc::bad_value, "field 'items': labels must be strings");
    inst.item_labels.push_back(it.get<std::string>());
  }
  inst.m = static_cast<int>(inst.item_labels.size());
  require(j["values"].is_array(), Errc::bad_value, "field 'values': expected an array");
  int row = 0;
  for (const auto& jrow : j["values"]) {
    require(jrow.is_array(), Errc::ragged_matrix,
            "field 'values': row " + std::to_string(row) + " is not an array");
    std::vector<Rat> vals;
    int col = 0;
    for (const auto& cell : jrow) {
      vals.push_back(detail::value_from_json(
          cell, "field 'values', row " + std::to_string(row) + ", column " + std::to_string(col)));
      ++col;
    }
    inst.values.push_back(std::move(vals));
    ++row;
  }
  validate_instance(inst);
  return inst;
}

inline std::string serialize_instance(const Instance& inst) {
  nlohmann::json j;
  j["agents"] = inst.n;
  j["items"] = inst.item_labels;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < inst.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < inst.m; ++k) row.push_back(format_rational(inst.values[i][k]));
    rows.push_back(std::move(row));
  }
  j["values"] = std::move(rows);
  return j.dump(2) + "\n";
}

inline int item_index(const Instance& inst, const std::string& label) {
  for (int j = 0; j < inst.m; ++j) {
    if (inst.item_labels[j] == label) return j;
  }
  fail(Errc::bad_allocation, "unknown item label '" + label + "'");
}

inline Allocation parse_allocation(const std::string& text, const Instance& inst) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::bad_json, std::string("malformed JSON: ") + e.what());
  }
  require(j.is_object() && j.contains("bundles"), Errc::bad_json, "missing field 'bundles'");
  require(j["bundles"].is_array(), Errc::bad_value, "field 'bundles': expected an array");
  Allocation alloc;
  for (const auto& jbundle : j["bundles"]) {
    require(jbundle.is_array(), Errc::bad_value, "field 'bundles': each bundle must be an array");
    std::vector<int> bundle;
    for (const auto& lab : jbundle) {
      require(lab.is_string(), Errc::bad_value, "field 'bundles': labels must be strings");
      bundle.push_back(item_index(inst, lab.get<std::string>()));
    }
    std::sort(bundle.begin(), bundle.end());
    alloc.bundles.push_back(std::move(bundle));
  }
  validate_allocation(inst, alloc);
  return alloc;
}

inline std::string serialize_allocation(const Instance& inst, const Allocation& alloc) {
  validate_allocation(inst, alloc);
  nlohmann::json bundles = nlohmann::json::array();
  for (const auto& bundle : alloc.bundles) {
    std::vector<std::string> labels;
    for (int j : bundle) labels.push_back(inst.item_labels[j]);
    std::sort(labels.begin(), labels.end());
    bundles.push_back(labels);
  }
  nlohmann::json j;
  j["bundles"] = std::move(bundles);
  return j.dump(2) + "\n";
}

}  // namespace manna
