#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "gcbp/core.hpp"
#include "gcbp/milp.hpp"
#include "gcbp/stage1.hpp"

namespace gcbp {

struct SmallLargeSplit {
  std::vector<ItemId> large;  // size >= eps
  std::vector<ItemId> small;
};

inline SmallLargeSplit split_small_large(const Instance& inst, std::span<const ItemId> items, const Rational& epsilon) {
  inverse_epsilon(epsilon);
  SmallLargeSplit out;
  for (ItemId id : items) (inst.size_of(id) >= epsilon ? out.large : out.small).push_back(id);
  return out;
}

/// Large items after linear grouping. The first class is set aside for
/// singleton bins; the others are rounded up to their largest member and
/// bucketed by rounded size.
struct LinearGrouping {
  std::vector<ItemId> first_class;
  std::vector<std::vector<ItemId>> classes;  // second class onwards
  std::vector<Rational> sizes;               // distinct rounded sizes, descending
  std::vector<std::vector<ItemId>> items_by_size;  // parallel to sizes

  std::size_t count(std::size_t z) const { return items_by_size[z].size(); }
};

inline LinearGrouping linear_group_large(const Instance& inst, std::span<const ItemId> large, const Rational& epsilon) {
  const std::size_t num_classes = num_sparse_classes(epsilon);
  const auto order = sorted_by_size_desc(inst, large);
  const auto cards = sparse_class_cards(order.size(), num_classes);
  LinearGrouping out;
  std::size_t next = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::vector<ItemId> members(order.begin() + static_cast<std::ptrdiff_t>(next),
                                order.begin() + static_cast<std::ptrdiff_t>(next + cards[c]));
    next += cards[c];
    if (c == 0) {
      out.first_class = std::move(members);
      continue;
    }
    if (members.empty()) continue;
    const Rational& rounded = inst.size_of(members.front());
    if (out.sizes.empty() || out.sizes.back() != rounded) {
      out.sizes.push_back(rounded);
      out.items_by_size.emplace_back();
    }
    auto& bucket = out.items_by_size.back();
    bucket.insert(bucket.end(), members.begin(), members.end());
    out.classes.push_back(std::move(members));
  }
  return out;
}

/// f rounded up to integer powers of (1+eps).
struct RoundedCost {
  std::vector<Rational> g;               // g(0..n)
  std::vector<Rational> levels;          // distinct values of g(j), j >= 1, ascending
  std::vector<std::size_t> max_cardinality;  // parallel to levels: largest j with g(j) = level

  std::size_t inverse(const Rational& y) const {
    const auto it = std::lower_bound(levels.begin(), levels.end(), y);
    if (it == levels.end() || *it != y) throw Error(ErrorKind::InvalidArgument, "value is not a rounded cost level");
    return max_cardinality[static_cast<std::size_t>(it - levels.begin())];
  }

  /// g(j), with cardinalities beyond the table clamped to its last entry.
  const Rational& at(std::size_t j) const { return g[std::min(j, g.size() - 1)]; }
};

inline RoundedCost round_cost_function(const CostFunction& f, const Rational& epsilon) {
  inverse_epsilon(epsilon);
  const Rational base = 1 + epsilon;
  RoundedCost rc;
  rc.g.assign(f.max_cardinality() + 1, Rational(0));
  Rational power(1);
  for (std::size_t j = 1; j <= f.max_cardinality(); ++j) {
    while (power < f(j)) power *= base;
    rc.g[j] = power;
    if (rc.levels.empty() || rc.levels.back() != power) {
      rc.levels.push_back(power);
      rc.max_cardinality.push_back(j);
    } else {
      rc.max_cardinality.back() = j;
    }
  }
  return rc;
}

/// eps^2 / (1/eps + 1)^(1/eps^3 - 1)
inline Rational expensive_threshold_factor(const Rational& epsilon) {
  const auto inv = static_cast<unsigned>(inverse_epsilon(epsilon));
  return epsilon * epsilon / pow(Rational(inv + 1), inv * inv * inv - 1);
}

struct DenseConfiguration {
  std::vector<std::size_t> gamma;  // large-item positions per rounded size
  Rational zeta;                   // rounded cost
  std::size_t capacity = 0;        // inverse of zeta: most items the bin may hold
  bool expensive = false;

  std::size_t positions() const {
    std::size_t total = 0;
    for (std::size_t x : gamma) total += x;
    return total;
  }
};

/// Configurations with rounded cost between g(1/eps^2 + 1) and omega.
/// Only dense bins are modelled here, hence the floor; when the cost table
/// is too short to hold a dense bin the list is empty.
inline std::vector<DenseConfiguration> enumerate_dense_configurations(const LinearGrouping& grouping,
                                                                      const Rational& omega, const RoundedCost& rc,
                                                                      const Rational& epsilon) {
  const std::size_t dense_min = sparse_cardinality_cap(epsilon) + 1;
  std::vector<DenseConfiguration> out;
  if (dense_min >= rc.g.size()) return out;
  const Rational& floor_cost = rc.g[dense_min];
  const Rational cutoff = expensive_threshold_factor(epsilon) * omega;
  const std::size_t k = grouping.sizes.size();

  for (std::size_t level = 0; level < rc.levels.size(); ++level) {
    const Rational& zeta = rc.levels[level];
    if (zeta < floor_cost || zeta > omega) continue;
    const std::size_t capacity = rc.max_cardinality[level];
    std::vector<std::size_t> gamma(k, 0);
    std::function<void(std::size_t, std::size_t, const Rational&)> rec = [&](std::size_t z, std::size_t used,
                                                                             const Rational& load) {
      if (z == k) {
        out.push_back(DenseConfiguration{gamma, zeta, capacity, zeta > cutoff});
        return;
      }
      Rational next = load;
      for (std::size_t x = 0; x <= grouping.count(z) && used + x <= capacity && next <= 1; ++x) {
        gamma[z] = x;
        rec(z + 1, used + x, next);
        next += grouping.sizes[z];
      }
      gamma[z] = 0;
    };
    rec(0, 0, Rational(0));
  }
  return out;
}

struct DenseMilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<Rational> v;                 // per configuration
  std::vector<std::vector<Rational>> w;    // [small item][configuration]
  std::vector<Integer> v_rounded;
  Rational objective;
  Rational supplementary_cost;             // zeta over cheap configurations with fractional v
  std::uint64_t nodes = 0;
};

/// min sum zeta_c v_c subject to
///   sum_c gamma_cz v_c >= n(z)                            per rounded size
///   sum_c w_ic >= 1                                       per small item
///   sum_i w_ic <= (capacity_c - positions_c) v_c          per configuration
///   sum_i s_i w_ic <= (1 - sum_z z gamma_cz) v_c          per configuration
/// with v_c integral on expensive configurations only.
inline DenseMilpSolution build_and_solve_dense_milp(const Instance& inst, const std::vector<DenseConfiguration>& configs,
                                                    const LinearGrouping& grouping, std::span<const ItemId> small,
                                                    std::uint64_t node_budget = kDefaultNodeBudget) {
  DenseMilpSolution out;
  const std::size_t nc = configs.size();
  const std::size_t ns = small.size();
  bool any_large = false;
  for (const auto& bucket : grouping.items_by_size) any_large = any_large || !bucket.empty();
  if (ns == 0 && !any_large) {
    out.status = SolveStatus::Optimal;
    out.objective = 0;
    out.supplementary_cost = 0;
    out.v.assign(nc, Rational(0));
    out.v_rounded.assign(nc, Integer(0));
    return out;
  }
  if (nc == 0) return out;

  auto w_index = [&](std::size_t i, std::size_t c) { return nc + i * nc + c; };
  MilpModel model;
  model.base = LpModel(nc + ns * nc);
  for (std::size_t c = 0; c < nc; ++c) {
    model.base.objective[c] = configs[c].zeta;
    if (configs[c].expensive) model.integer_vars.push_back(c);
  }
  for (std::size_t z = 0; z < grouping.sizes.size(); ++z) {
    auto& row = model.base.add_row(Relation::GreaterEqual, Rational(static_cast<unsigned long>(grouping.count(z))));
    for (std::size_t c = 0; c < nc; ++c) row.coeffs[c] = static_cast<unsigned long>(configs[c].gamma[z]);
  }
  for (std::size_t i = 0; i < ns; ++i) {
    auto& row = model.base.add_row(Relation::GreaterEqual, Rational(1));
    for (std::size_t c = 0; c < nc; ++c) row.coeffs[w_index(i, c)] = 1;
  }
  for (std::size_t c = 0; c < nc; ++c) {
    auto& count_row = model.base.add_row(Relation::LessEqual, Rational(0));
    for (std::size_t i = 0; i < ns; ++i) count_row.coeffs[w_index(i, c)] = 1;
    count_row.coeffs[c] = -Rational(static_cast<unsigned long>(configs[c].capacity - configs[c].positions()));

    auto& size_row = model.base.add_row(Relation::LessEqual, Rational(0));
    Rational room(1);
    for (std::size_t z = 0; z < grouping.sizes.size(); ++z) {
      room -= grouping.sizes[z] * static_cast<unsigned long>(configs[c].gamma[z]);
    }
    for (std::size_t i = 0; i < ns; ++i) size_row.coeffs[w_index(i, c)] = inst.size_of(small[i]);
    size_row.coeffs[c] = -room;
  }

  const MilpSolution sol = solve_milp(model, node_budget);
  out.status = sol.status;
  out.nodes = sol.nodes;
  if (sol.status != SolveStatus::Optimal) return out;

  out.objective = sol.objective_value;
  out.v.assign(sol.values.begin(), sol.values.begin() + static_cast<std::ptrdiff_t>(nc));
  out.w.assign(ns, std::vector<Rational>(nc));
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t c = 0; c < nc; ++c) out.w[i][c] = sol.values[w_index(i, c)];
  }
  out.supplementary_cost = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    out.v_rounded.push_back(ceil(out.v[c]));
    if (!configs[c].expensive && !is_integral(out.v[c])) out.supplementary_cost += configs[c].zeta;
  }
  return out;
}

/// A bin opened for a configuration, with its large items placed.
struct ConfiguredBin {
  std::size_t config = 0;
  std::vector<ItemId> items;
  std::size_t small_slots = 0;  // capacity minus large positions
  Rational small_room;          // 1 minus the rounded large load
};

/// v'_c bins per configuration, large items filled into the positions in
/// bin order. Positions may stay empty.
inline std::vector<ConfiguredBin> open_configured_bins(const std::vector<DenseConfiguration>& configs,
                                                       const std::vector<Integer>& v_rounded,
                                                       const LinearGrouping& grouping) {
  std::vector<ConfiguredBin> bins;
  std::vector<std::size_t> next(grouping.sizes.size(), 0);
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (Integer copy = 0; copy < v_rounded[c]; ++copy) {
      ConfiguredBin bin;
      bin.config = c;
      bin.small_slots = configs[c].capacity - configs[c].positions();
      bin.small_room = 1;
      for (std::size_t z = 0; z < grouping.sizes.size(); ++z) {
        bin.small_room -= grouping.sizes[z] * static_cast<unsigned long>(configs[c].gamma[z]);
        for (std::size_t x = 0; x < configs[c].gamma[z] && next[z] < grouping.count(z); ++x) {
          bin.items.push_back(grouping.items_by_size[z][next[z]++]);
        }
      }
      bins.push_back(std::move(bin));
    }
  }
  for (std::size_t z = 0; z < grouping.sizes.size(); ++z) {
    if (next[z] != grouping.count(z)) throw Error(ErrorKind::InternalInfeasible, "large items left without a position");
  }
  return bins;
}

struct SmallAssignment {
  std::vector<std::vector<Rational>> mu;  // [small item][bin]
  std::size_t rows = 0;                   // constraint count of the LP
};

/// Basic feasible point of
///   sum_i mu_ib <= slots_b,  sum_i s_i mu_ib <= room_b,  sum_b mu_ib = 1.
inline SmallAssignment assign_small_items_lp(const Instance& inst, const std::vector<ConfiguredBin>& bins,
                                             std::span<const ItemId> small) {
  SmallAssignment out;
  const std::size_t nb = bins.size();
  const std::size_t ns = small.size();
  out.mu.assign(ns, std::vector<Rational>(nb));
  if (ns == 0) return out;
  if (nb == 0) throw Error(ErrorKind::InternalInfeasible, "small items but no bins");

  auto index = [&](std::size_t i, std::size_t b) { return i * nb + b; };
  LpModel lp(ns * nb);
  for (std::size_t b = 0; b < nb; ++b) {
    auto& count_row = lp.add_row(Relation::LessEqual, Rational(static_cast<unsigned long>(bins[b].small_slots)));
    for (std::size_t i = 0; i < ns; ++i) count_row.coeffs[index(i, b)] = 1;
    auto& size_row = lp.add_row(Relation::LessEqual, bins[b].small_room);
    for (std::size_t i = 0; i < ns; ++i) size_row.coeffs[index(i, b)] = inst.size_of(small[i]);
  }
  for (std::size_t i = 0; i < ns; ++i) {
    auto& row = lp.add_row(Relation::Equal, Rational(1));
    for (std::size_t b = 0; b < nb; ++b) row.coeffs[index(i, b)] = 1;
  }
  out.rows = lp.constraints.size();
  const LpSolution sol = find_basic_feasible(lp);
  if (sol.status != SolveStatus::Optimal) {
    throw Error(ErrorKind::InternalInfeasible, "small-item assignment LP is infeasible");
  }
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t b = 0; b < nb; ++b) out.mu[i][b] = sol.values[index(i, b)];
  }
  return out;
}

struct DenseFinish {
  Packing packing;
  std::size_t removed_items = 0;
  std::size_t overflow_bins = 0;
};

/// Integral rows of mu place their item; fractional ones go to overflow bins
/// of at most 1/eps items each. The first linear-grouping class follows as
/// singletons, and empty bins are dropped.
inline DenseFinish finalize_dense_packing(std::vector<ConfiguredBin> bins, const SmallAssignment& assignment,
                                          std::span<const ItemId> small, std::span<const ItemId> first_class,
                                          const Rational& epsilon) {
  const auto per_overflow = static_cast<std::size_t>(inverse_epsilon(epsilon));
  DenseFinish out;
  std::vector<ItemId> removed;
  for (std::size_t i = 0; i < small.size(); ++i) {
    std::optional<std::size_t> target;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (assignment.mu[i][b] == 1) target = b;
    }
    if (target) {
      bins[*target].items.push_back(small[i]);
    } else {
      removed.push_back(small[i]);
    }
  }
  for (auto& bin : bins) {
    if (!bin.items.empty()) out.packing.bins.push_back(std::move(bin.items));
  }
  out.removed_items = removed.size();
  for (std::size_t start = 0; start < removed.size(); start += per_overflow) {
    const std::size_t end = std::min(removed.size(), start + per_overflow);
    out.packing.bins.emplace_back(removed.begin() + static_cast<std::ptrdiff_t>(start),
                                  removed.begin() + static_cast<std::ptrdiff_t>(end));
    ++out.overflow_bins;
  }
  for (ItemId id : first_class) out.packing.bins.push_back({id});
  return out;
}

/// Outcome of the second stage for one guess of the largest rounded bin cost.
struct Stage2Result {
  SolveStatus status = SolveStatus::Infeasible;
  Packing packing;
  Rational omega;
  Rational milp_objective;
  Rational supplementary_cost;
  std::size_t configured_bins = 0;
  std::size_t removed_items = 0;
  std::size_t overflow_bins = 0;
  std::size_t first_class_size = 0;
  std::uint64_t nodes = 0;
};

/// Packs the dense items for one omega. An empty dense instance packs to
/// nothing without building a model.
inline Stage2Result pack_dense(const Instance& inst, std::span<const ItemId> dense, const Rational& omega,
                               const Rational& epsilon, const RoundedCost& rc,
                               std::uint64_t node_budget = kDefaultNodeBudget) {
  Stage2Result out;
  out.omega = omega;
  if (dense.empty()) {
    out.status = SolveStatus::Optimal;
    return out;
  }
  const auto split = split_small_large(inst, dense, epsilon);
  const auto grouping = linear_group_large(inst, split.large, epsilon);
  const auto configs = enumerate_dense_configurations(grouping, omega, rc, epsilon);
  const auto milp = build_and_solve_dense_milp(inst, configs, grouping, split.small, node_budget);
  out.status = milp.status;
  out.nodes = milp.nodes;
  if (milp.status != SolveStatus::Optimal) return out;

  auto bins = open_configured_bins(configs, milp.v_rounded, grouping);
  out.configured_bins = bins.size();
  const auto assignment = assign_small_items_lp(inst, bins, split.small);
  auto finish = finalize_dense_packing(std::move(bins), assignment, split.small, grouping.first_class, epsilon);
  out.packing = std::move(finish.packing);
  out.milp_objective = milp.objective;
  out.supplementary_cost = milp.supplementary_cost;
  out.removed_items = finish.removed_items;
  out.overflow_bins = finish.overflow_bins;
  out.first_class_size = grouping.first_class.size();
  return out;
}

}  // namespace gcbp
