#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "gcbp/error.hpp"
#include "gcbp/rational.hpp"

namespace gcbp {

/// Items are addressed by their 0-based index in the instance. File formats
/// and the CLI print them 1-based.
using ItemId = int;

struct Item {
  ItemId id = 0;
  Rational size;
};

/// Cardinality cost table f(0..n), normalized so that f(0)=0 and f(1)=1.
class CostFunction {
 public:
  CostFunction() : table_{Rational(0)}, factor_(1) {}
  CostFunction(std::vector<Rational> table, Rational normalization_factor)
      : table_(std::move(table)), factor_(std::move(normalization_factor)) {}

  const Rational& operator()(std::size_t cardinality) const {
    if (cardinality >= table_.size()) {
      throw Error(ErrorKind::IndexOutOfRange,
                  "cost requested for cardinality " + std::to_string(cardinality) + " beyond table");
    }
    return table_[cardinality];
  }

  std::size_t max_cardinality() const { return table_.size() - 1; }
  std::span<const Rational> table() const { return table_; }

  /// The raw f(1) that the table was divided by.
  const Rational& normalization_factor() const { return factor_; }
  Rational to_raw(const Rational& normalized) const { return normalized * factor_; }

 private:
  std::vector<Rational> table_;
  Rational factor_;
};

class Instance {
 public:
  Instance() = default;

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<Item>& items() const { return items_; }
  const Rational& size_of(ItemId id) const { return items_.at(static_cast<std::size_t>(id)).size; }
  const CostFunction& cost() const { return cost_; }

  std::vector<Rational> sizes() const {
    std::vector<Rational> out;
    out.reserve(items_.size());
    for (const auto& item : items_) out.push_back(item.size);
    return out;
  }

  std::vector<ItemId> all_ids() const {
    std::vector<ItemId> ids(items_.size());
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
  }

 private:
  friend Instance validate_instance(std::span<const Rational>, std::span<const Rational>);
  std::vector<Item> items_;
  CostFunction cost_;
};

/// A partition of item ids into non-empty bins.
struct Packing {
  std::vector<std::vector<ItemId>> bins;

  std::size_t num_items() const {
    std::size_t total = 0;
    for (const auto& bin : bins) total += bin.size();
    return total;
  }

  void append(const Packing& other) { bins.insert(bins.end(), other.bins.begin(), other.bins.end()); }

  /// Sorts ids inside bins and bins lexicographically; cost and feasibility
  /// are unchanged.
  void canonicalize() {
    for (auto& bin : bins) std::sort(bin.begin(), bin.end());
    std::sort(bins.begin(), bins.end());
  }
};

/// Builds an instance from raw sizes and a raw cost table, dividing the table
/// through by its f(1).
inline Instance validate_instance(std::span<const Rational> raw_sizes, std::span<const Rational> raw_cost) {
  if (raw_cost.size() != raw_sizes.size() + 1) {
    throw Error(ErrorKind::InvalidArgument, "cost table must have n+1 = " + std::to_string(raw_sizes.size() + 1) +
                                                " entries, got " + std::to_string(raw_cost.size()));
  }
  for (std::size_t i = 0; i < raw_sizes.size(); ++i) {
    if (raw_sizes[i] < 0 || raw_sizes[i] > 1) {
      throw Error(ErrorKind::SizeOutOfRange,
                  "item " + std::to_string(i + 1) + " has size " + to_string(raw_sizes[i]) + " outside [0,1]");
    }
  }
  if (raw_cost[0] != 0) throw Error(ErrorKind::BadAnchor, "f(0) must be 0, got " + to_string(raw_cost[0]));
  if (raw_cost.size() > 1 && raw_cost[1] <= 0) {
    throw Error(ErrorKind::BadAnchor, "f(1) must be positive, got " + to_string(raw_cost[1]));
  }
  for (std::size_t j = 0; j + 1 < raw_cost.size(); ++j) {
    if (raw_cost[j] > raw_cost[j + 1]) {
      throw Error(ErrorKind::NonMonotoneCost, "f(" + std::to_string(j) + ") = " + to_string(raw_cost[j]) +
                                                  " > f(" + std::to_string(j + 1) + ") = " + to_string(raw_cost[j + 1]));
    }
  }

  Instance inst;
  inst.items_.reserve(raw_sizes.size());
  for (std::size_t i = 0; i < raw_sizes.size(); ++i) {
    inst.items_.push_back(Item{static_cast<ItemId>(i), raw_sizes[i]});
  }
  const Rational factor = raw_cost.size() > 1 ? raw_cost[1] : Rational(1);
  std::vector<Rational> table;
  table.reserve(raw_cost.size());
  for (const auto& value : raw_cost) table.push_back(Rational(value / factor));
  inst.cost_ = CostFunction(std::move(table), factor);
  return inst;
}

inline Instance validate_instance(const std::vector<Rational>& raw_sizes, const std::vector<Rational>& raw_cost) {
  return validate_instance(std::span<const Rational>(raw_sizes), std::span<const Rational>(raw_cost));
}

/// Sum of f(|bin|) over bins, in the normalized scale.
inline Rational packing_cost(const Instance& inst, const Packing& p) {
  Rational total(0);
  for (const auto& bin : p.bins) total += inst.cost()(bin.size());
  return total;
}

inline Rational bin_load(const Instance& inst, std::span<const ItemId> bin) {
  Rational load(0);
  for (ItemId id : bin) load += inst.size_of(id);
  return load;
}

struct OverfullBin {
  std::size_t bin_index = 0;
  Rational total;
};

struct VerificationReport {
  std::vector<OverfullBin> overfull;
  std::vector<ItemId> missing;
  std::vector<ItemId> duplicated;
  std::vector<ItemId> unknown;
  std::size_t empty_bins = 0;

  bool ok() const {
    return overfull.empty() && missing.empty() && duplicated.empty() && unknown.empty() && empty_bins == 0;
  }

  std::string describe() const {
    if (ok()) return "OK";
    std::ostringstream out;
    const char* sep = "";
    for (const auto& bin : overfull) {
      out << sep << "bin " << bin.bin_index + 1 << " total " << bin.total << " > 1";
      sep = "; ";
    }
    for (ItemId id : missing) {
      out << sep << "item " << id + 1 << " unpacked";
      sep = "; ";
    }
    for (ItemId id : duplicated) {
      out << sep << "item " << id + 1 << " packed more than once";
      sep = "; ";
    }
    for (ItemId id : unknown) {
      out << sep << "item " << id + 1 << " not in the item set";
      sep = "; ";
    }
    if (empty_bins > 0) out << sep << empty_bins << " empty bin(s)";
    return out.str();
  }
};

/// Checks that `p` partitions exactly `expected` into bins of load at most 1.
inline VerificationReport verify_packing(const Instance& inst, const Packing& p, std::span<const ItemId> expected) {
  VerificationReport report;
  std::vector<int> wanted(inst.size(), 0);
  for (ItemId id : expected) wanted.at(static_cast<std::size_t>(id)) = 1;
  std::vector<int> seen(inst.size(), 0);

  for (std::size_t b = 0; b < p.bins.size(); ++b) {
    const auto& bin = p.bins[b];
    if (bin.empty()) {
      ++report.empty_bins;
      continue;
    }
    Rational load(0);
    for (ItemId id : bin) {
      if (id < 0 || static_cast<std::size_t>(id) >= inst.size() || !wanted[static_cast<std::size_t>(id)]) {
        report.unknown.push_back(id);
        continue;
      }
      if (seen[static_cast<std::size_t>(id)]++ == 1) report.duplicated.push_back(id);
      load += inst.size_of(id);
    }
    if (load > 1) report.overfull.push_back(OverfullBin{b, load});
  }
  for (ItemId id : expected) {
    if (seen[static_cast<std::size_t>(id)] == 0) report.missing.push_back(id);
  }
  std::sort(report.missing.begin(), report.missing.end());
  std::sort(report.duplicated.begin(), report.duplicated.end());
  return report;
}

inline VerificationReport verify_packing(const Instance& inst, const Packing& p) {
  const auto ids = inst.all_ids();
  return verify_packing(inst, p, ids);
}

enum class Density { Sparse, Dense };

/// Sparse bins hold 1..1/eps^2 items, dense bins more.
inline Density bin_density_class(std::size_t bin_cardinality, const Rational& epsilon) {
  const int inv = inverse_epsilon(epsilon);
  if (bin_cardinality < 1) throw Error(ErrorKind::InvalidArgument, "bin cardinality must be at least 1");
  return bin_cardinality <= static_cast<std::size_t>(inv) * static_cast<std::size_t>(inv) ? Density::Sparse
                                                                                         : Density::Dense;
}

/// Item ids ordered by size non-increasing, ties by smaller id.
inline std::vector<ItemId> sorted_by_size_desc(const Instance& inst, std::span<const ItemId> ids) {
  std::vector<ItemId> out(ids.begin(), ids.end());
  std::stable_sort(out.begin(), out.end(), [&](ItemId a, ItemId b) {
    const int c = cmp(inst.size_of(a), inst.size_of(b));
    return c != 0 ? c > 0 : a < b;
  });
  return out;
}

}  // namespace gcbp
