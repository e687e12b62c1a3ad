#pragma once

#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gcbp/aptas.hpp"
#include "gcbp/core.hpp"
#include "json.hpp"

namespace gcbp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kInstanceFormat = "gcbp-instance-v1";
inline constexpr const char* kPackingFormat = "gcbp-packing-v1";

/// Raw file contents: sizes and the unnormalized cost table.
struct InstanceFile {
  std::vector<Rational> sizes;
  std::vector<Rational> cost;
  Json metadata = Json::object();

  Instance to_instance() const { return validate_instance(sizes, cost); }
};

namespace detail {

inline Rational rational_field(const Json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (!value.is_string()) throw Error(ErrorKind::ParseError, where + ": expected a rational string");
  try {
    return parse_rational(value.get<std::string>());
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, where + ": " + e.what());
  }
}

inline std::vector<Rational> rational_list(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw Error(ErrorKind::ParseError, std::string("missing array field '") + key + "'");
  }
  std::vector<Rational> out;
  const auto& arr = doc[key];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(rational_field(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

inline Json rational_strings(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(to_string(v));
  return arr;
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, source + ": " + e.what());
  }
}

inline void check_format(const Json& doc, const char* expected) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "top level must be an object");
  if (doc.contains("format") && doc["format"] != expected) {
    throw Error(ErrorKind::ParseError, "format is '" + doc["format"].dump() + "', expected " + expected);
  }
}

}  // namespace detail

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline InstanceFile parse_instance_text(const std::string& text, const std::string& source = "<instance>") {
  const Json doc = detail::parse_json_text(text, source);
  detail::check_format(doc, kInstanceFormat);
  InstanceFile file;
  file.sizes = detail::rational_list(doc, "sizes");
  file.cost = detail::rational_list(doc, "cost");
  if (doc.contains("metadata")) file.metadata = doc["metadata"];
  return file;
}

inline std::string instance_to_text(const InstanceFile& file) {
  Json doc;
  doc["format"] = kInstanceFormat;
  doc["sizes"] = detail::rational_strings(file.sizes);
  doc["cost"] = detail::rational_strings(file.cost);
  if (!file.metadata.empty()) doc["metadata"] = file.metadata;
  return doc.dump(2) + "\n";
}

/// Raw-scale file for an instance; the cost table is scaled back by f(1).
inline InstanceFile instance_file_of(const Instance& inst) {
  InstanceFile file;
  file.sizes = inst.sizes();
  for (const auto& v : inst.cost().table()) file.cost.push_back(inst.cost().to_raw(v));
  return file;
}

inline Instance parse_instance_file(const std::string& path) {
  return parse_instance_text(read_text_file(path), path).to_instance();
}

inline Json certificate_to_json(const AptasCertificate& c) {
  Json j;
  j["epsilon"] = to_string(c.epsilon);
  j["signature"] = c.signature;
  j["sparse_items"] = c.pi;
  j["stage1_cost"] = to_string(c.stage1_cost);
  j["omega"] = c.omega ? Json(to_string(*c.omega)) : Json(nullptr);
  j["stage2_cost"] = to_string(c.stage2_cost);
  j["total_cost"] = to_string(c.total_cost);
  j["reference_cost"] = to_string(c.reference_cost);
  j["reference_is_oracle"] = c.reference_is_oracle;
  j["bound_rhs"] = to_string(c.bound_rhs);
  j["sparse_ip_objective"] = to_string(c.sparse_ip_objective);
  j["milp_objective"] = to_string(c.milp_objective);
  j["supplementary_cost"] = to_string(c.supplementary_cost);
  j["overflow_bins"] = c.overflow_bins;
  j["first_class_size"] = c.first_class_size;
  j["guesses_examined"] = c.guesses_examined;
  j["sparse_ip_solves"] = c.sparse_ip_solves;
  j["dense_solves"] = c.dense_solves;
  j["milp_nodes"] = c.milp_nodes;
  j["degraded"] = c.degraded;
  return j;
}

/// Bins with 1-based item ids, per-bin and total costs in both scales.
inline std::string packing_to_text(const Instance& inst, const Packing& p, const std::string& algorithm,
                                   const AptasCertificate* certificate = nullptr) {
  Json doc;
  doc["format"] = kPackingFormat;
  doc["algorithm"] = algorithm;
  doc["num_items"] = inst.size();
  Json bins = Json::array();
  for (const auto& bin : p.bins) {
    Json b;
    Json items = Json::array();
    for (ItemId id : bin) items.push_back(id + 1);
    b["items"] = items;
    b["cardinality"] = bin.size();
    const Rational& cost = inst.cost()(bin.size());
    b["cost"] = to_string(cost);
    b["raw_cost"] = to_string(inst.cost().to_raw(cost));
    bins.push_back(b);
  }
  doc["bins"] = bins;
  doc["num_bins"] = p.bins.size();
  const Rational total = packing_cost(inst, p);
  doc["total_cost"] = to_string(total);
  doc["total_raw_cost"] = to_string(inst.cost().to_raw(total));
  if (certificate) doc["certificate"] = certificate_to_json(*certificate);
  return doc.dump(2) + "\n";
}

inline void write_packing_file(const std::string& path, const Instance& inst, const Packing& p,
                               const std::string& algorithm, const AptasCertificate* certificate = nullptr) {
  write_text_file(path, packing_to_text(inst, p, algorithm, certificate));
}

/// Reads the bins back to 0-based ids. Costs in the file are not trusted.
inline Packing parse_packing_text(const std::string& text, const std::string& source = "<packing>") {
  const Json doc = detail::parse_json_text(text, source);
  detail::check_format(doc, kPackingFormat);
  if (!doc.contains("bins") || !doc["bins"].is_array()) throw Error(ErrorKind::ParseError, "missing array field 'bins'");
  Packing p;
  const auto& bins = doc["bins"];
  for (std::size_t b = 0; b < bins.size(); ++b) {
    const std::string where = "bins[" + std::to_string(b) + "]";
    const Json& items = bins[b].is_object() && bins[b].contains("items") ? bins[b]["items"] : bins[b];
    if (!items.is_array()) throw Error(ErrorKind::ParseError, where + ": expected an item list");
    std::vector<ItemId> bin;
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (!items[k].is_number_integer() || items[k].get<long>() < 1) {
        throw Error(ErrorKind::ParseError, where + ".items[" + std::to_string(k) + "]: expected a positive item id");
      }
      bin.push_back(static_cast<ItemId>(items[k].get<long>() - 1));
    }
    p.bins.push_back(std::move(bin));
  }
  return p;
}

inline Packing parse_packing_file(const std::string& path) { return parse_packing_text(read_text_file(path), path); }

}  // namespace gcbp
