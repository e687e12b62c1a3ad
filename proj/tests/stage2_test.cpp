#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "gcbp/oracle.hpp"
#include "gcbp/stage2.hpp"
#include "test_util.hpp"

namespace gcbp {
namespace {

using testing::make_instance;
using testing::R;
using testing::Rs;

TEST(SplitSmallLarge, Threshold) {
  const Instance inst = make_instance({"3/5", "3/10", "0", "1/2"}, {"0", "1", "1", "1", "1"});
  const auto split = split_small_large(inst, inst.all_ids(), R("1/2"));
  EXPECT_EQ(split.large, (std::vector<ItemId>{0, 3}));
  EXPECT_EQ(split.small, (std::vector<ItemId>{1, 2}));
  const auto whole = split_small_large(inst, inst.all_ids(), R("1"));
  EXPECT_TRUE(whole.large.empty());

  const Instance unit = make_instance({"1", "99/100"}, {"0", "1", "1"});
  EXPECT_EQ(split_small_large(unit, unit.all_ids(), R("1")).large, std::vector<ItemId>{0});
}

TEST(LinearGroup, Profiles) {
  const Instance none = make_instance({}, {"0"});
  const auto empty = linear_group_large(none, {}, R("1/2"));
  EXPECT_TRUE(empty.first_class.empty());
  EXPECT_TRUE(empty.sizes.empty());

  const Instance eight = make_instance({"1/2", "5/8", "3/4", "7/8", "1", "9/16", "11/16", "13/16"},
                                       {"0", "1", "1", "1", "1", "1", "1", "1", "1"});
  const auto g8 = linear_group_large(eight, eight.all_ids(), R("1/2"));
  EXPECT_EQ(g8.first_class, std::vector<ItemId>{4});
  ASSERT_EQ(g8.classes.size(), 7u);
  for (const auto& c : g8.classes) EXPECT_EQ(c.size(), 1u);
  EXPECT_EQ(g8.sizes, Rs({"7/8", "13/16", "3/4", "11/16", "5/8", "9/16", "1/2"}));

  const Instance three = make_instance({"1/2", "3/4", "3/4"}, {"0", "1", "1", "1"});
  const auto g3 = linear_group_large(three, three.all_ids(), R("1/2"));
  EXPECT_EQ(g3.first_class, std::vector<ItemId>{1});
  ASSERT_EQ(g3.classes.size(), 2u);
  EXPECT_EQ(g3.sizes, Rs({"3/4", "1/2"}));

  // eps = 1: one class, so every large item is set aside
  const auto all = linear_group_large(three, three.all_ids(), R("1"));
  EXPECT_EQ(all.first_class.size(), 3u);
  EXPECT_TRUE(all.sizes.empty());
}

TEST(LinearGroup, RoundsUpWithinClass) {
  const Instance inst = make_instance({"1/2", "1/2", "5/8", "3/5", "7/10", "4/5", "9/10", "1", "1/2", "11/20"},
                                      {"0", "1", "1", "1", "1", "1", "1", "1", "1", "1", "1"});
  const auto g = linear_group_large(inst, inst.all_ids(), R("1/2"));
  EXPECT_EQ(g.first_class.size(), 2u);  // ceil(10/8)
  std::size_t placed = g.first_class.size();
  for (std::size_t z = 0; z < g.sizes.size(); ++z) {
    for (ItemId id : g.items_by_size[z]) EXPECT_LE(inst.size_of(id), g.sizes[z]);
    placed += g.count(z);
  }
  EXPECT_EQ(placed, 10u);
  EXPECT_LE(g.sizes.size(), 7u);
}

TEST(RoundCost, Examples) {
  const Instance a = make_instance({"0", "0", "0", "0"}, {"0", "1", "1", "2", "3"});
  const auto rc = round_cost_function(a.cost(), R("1/2"));
  EXPECT_EQ(rc.g, Rs({"0", "1", "1", "9/4", "27/8"}));
  EXPECT_EQ(rc.levels, Rs({"1", "9/4", "27/8"}));
  EXPECT_EQ(rc.max_cardinality, (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_EQ(rc.inverse(R("1")), 2u);

  const Instance b = make_instance({"0"}, {"0", "1"});
  EXPECT_EQ(round_cost_function(b.cost(), R("1/3")).g, Rs({"0", "1"}));

  const Instance c = make_instance({"0", "0"}, {"0", "1", "3/2"});
  EXPECT_EQ(round_cost_function(c.cost(), R("1/2")).g[2], R("3/2"));
}

TEST(ExpensiveFactor, Values) {
  EXPECT_EQ(expensive_threshold_factor(R("1")), 1);
  EXPECT_EQ(expensive_threshold_factor(R("1/2")), R("1/8748"));
}

TEST(DenseConfigurations, NoLargeItems) {
  const Instance inst = make_instance({"0", "0", "0", "0", "0", "0"}, {"0", "1", "1", "1", "1", "2", "3"});
  const auto rc = round_cost_function(inst.cost(), R("1/2"));
  ASSERT_EQ(rc.levels, Rs({"1", "9/4", "27/8"}));
  const LinearGrouping none;
  const auto configs = enumerate_dense_configurations(none, R("9/4"), rc, R("1/2"));
  ASSERT_EQ(configs.size(), 1u);  // 1 is below the dense floor g(5) = 9/4
  EXPECT_TRUE(configs[0].gamma.empty());
  EXPECT_EQ(configs[0].zeta, R("9/4"));
  EXPECT_EQ(configs[0].capacity, 5u);

  // omega above every level admits both dense levels, none beyond omega
  const auto wide = enumerate_dense_configurations(none, R("27/8"), rc, R("1/2"));
  ASSERT_EQ(wide.size(), 2u);
  for (const auto& c : wide) EXPECT_LE(c.zeta, R("27/8"));
}

TEST(DenseConfigurations, CapacityLimitsLargeCount) {
  const Instance inst = make_instance({"3/5", "3/5", "3/5", "0", "0"}, {"0", "1", "1", "1", "1", "1"});
  const auto rc = round_cost_function(inst.cost(), R("1/2"));
  const auto grouping = linear_group_large(inst, std::vector<ItemId>{0, 1, 2}, R("1/2"));
  ASSERT_EQ(grouping.sizes, Rs({"3/5"}));
  const auto configs = enumerate_dense_configurations(grouping, R("1"), rc, R("1/2"));
  std::set<std::size_t> counts;
  for (const auto& c : configs) counts.insert(c.gamma[0]);
  EXPECT_EQ(counts, (std::set<std::size_t>{0, 1}));
}

TEST(DenseMilp, EmptyInstance) {
  const Instance inst = make_instance({}, {"0"});
  const auto sol = build_and_solve_dense_milp(inst, {}, LinearGrouping{}, {});
  EXPECT_EQ(sol.status, SolveStatus::Optimal);
  EXPECT_EQ(sol.objective, 0);
}

TEST(DenseMilp, SixZeroItems) {
  const Instance inst = make_instance({"0", "0", "0", "0", "0", "0"}, {"0", "1", "1", "1", "1", "1", "1"});
  const Rational eps = R("1/2");
  const auto rc = round_cost_function(inst.cost(), eps);
  const auto grouping = linear_group_large(inst, {}, eps);
  const auto configs = enumerate_dense_configurations(grouping, R("1"), rc, eps);
  ASSERT_EQ(configs.size(), 1u);
  EXPECT_EQ(configs[0].capacity, 6u);
  const auto small = inst.all_ids();
  const auto sol = build_and_solve_dense_milp(inst, configs, grouping, small);
  ASSERT_EQ(sol.status, SolveStatus::Optimal);
  EXPECT_EQ(sol.v[0], 1);
  EXPECT_EQ(sol.objective, rc.g[6]);
  for (const auto& row : sol.w) EXPECT_EQ(row[0], 1);

  // mu = w / v' is feasible for the assignment LP of the rounded bins
  const auto bins = open_configured_bins(configs, sol.v_rounded, grouping);
  ASSERT_EQ(bins.size(), 1u);
  Rational count(0);
  Rational load(0);
  for (std::size_t i = 0; i < small.size(); ++i) {
    const Rational mu = sol.w[i][0] / Rational(sol.v_rounded[0]);
    EXPECT_EQ(mu, 1);
    count += mu;
    load += inst.size_of(small[i]) * mu;
  }
  EXPECT_LE(count, static_cast<unsigned long>(bins[0].small_slots));
  EXPECT_LE(load, bins[0].small_room);
}

TEST(DenseMilp, InfeasibleWithoutPositions) {
  const Instance inst = make_instance({"3/5", "3/5", "3/5", "3/5", "0"}, {"0", "1", "1", "2", "3", "4"});
  const Rational eps = R("1/2");
  const auto rc = round_cost_function(inst.cost(), eps);
  const std::vector<ItemId> large{0, 1, 2, 3};
  const auto grouping = linear_group_large(inst, large, eps);
  // omega = 1 is below the dense floor, so no configuration offers a position
  const auto configs = enumerate_dense_configurations(grouping, R("1"), rc, eps);
  EXPECT_TRUE(configs.empty());
  EXPECT_EQ(build_and_solve_dense_milp(inst, configs, grouping, std::vector<ItemId>{4}).status,
            SolveStatus::Infeasible);
}

ConfiguredBin bin_with(std::size_t slots, Rational room) {
  ConfiguredBin b;
  b.small_slots = slots;
  b.small_room = std::move(room);
  return b;
}

TEST(SmallItemLp, OneBinTakesBoth) {
  const Instance inst = make_instance({"1/4", "1/4"}, {"0", "1", "1"});
  const auto small = inst.all_ids();
  const std::vector<ConfiguredBin> bins{bin_with(2, 1)};
  const auto a = assign_small_items_lp(inst, bins, small);
  EXPECT_EQ(a.mu[0][0], 1);
  EXPECT_EQ(a.mu[1][0], 1);
  const auto done = finalize_dense_packing(bins, a, small, {}, R("1/2"));
  EXPECT_EQ(done.overflow_bins, 0u);
  ASSERT_EQ(done.packing.bins.size(), 1u);
  EXPECT_EQ(done.packing.bins[0].size(), 2u);
}

TEST(SmallItemLp, SupportBound) {
  const Instance inst = make_instance({"1/4", "1/4"}, {"0", "1", "1"});
  const auto small = inst.all_ids();
  const std::vector<ConfiguredBin> bins{bin_with(1, 1), bin_with(1, 1)};
  const auto a = assign_small_items_lp(inst, bins, small);
  std::size_t positive = 0;
  for (const auto& row : a.mu) {
    Rational total(0);
    for (const auto& x : row) {
      if (x > 0) ++positive;
      total += x;
    }
    EXPECT_EQ(total, 1);
  }
  EXPECT_LE(positive, 2 * 2 + 2u);
  EXPECT_LE(positive, a.rows);
}

TEST(FinalizeDense, OverflowAndFirstClass) {
  const Instance inst = make_instance({"1/4", "1/4", "1"}, {"0", "1", "1", "1"});
  const std::vector<ItemId> small{0, 1};
  const std::vector<ConfiguredBin> bins{bin_with(1, 1)};
  SmallAssignment half;
  half.mu = {{R("1/2")}, {R("1/2")}};
  const std::vector<ItemId> first{2};
  const auto done = finalize_dense_packing(bins, half, small, first, R("1/2"));
  EXPECT_EQ(done.removed_items, 2u);
  EXPECT_EQ(done.overflow_bins, 1u);  // within 2 eps |B| + 1 = 2
  ASSERT_EQ(done.packing.bins.size(), 2u);  // the configured bin stayed empty and is dropped
  EXPECT_EQ(done.packing.bins[0], (std::vector<ItemId>{0, 1}));
  EXPECT_EQ(done.packing.bins[1], std::vector<ItemId>{2});
  EXPECT_EQ(packing_cost(inst, done.packing), 2);
}

/// Instance restricted to `ids`, relabelled 0.., with sizes replaced where
/// `sizes` says so. The cost table is cut to the new length.
Instance sub_instance(const Instance& inst, const std::vector<ItemId>& ids, const std::vector<Rational>& sizes) {
  std::vector<Rational> cost(inst.cost().table().begin(),
                             inst.cost().table().begin() + static_cast<std::ptrdiff_t>(ids.size() + 1));
  return validate_instance(sizes, cost);
}

struct DenseCase {
  Instance inst;
  Rational eps;
};

DenseCase dense_leaning(testing::Rng& rng, int round) {
  const Rational eps = round % 2 == 0 ? R("1") : R("1/2");
  const std::size_t n = static_cast<std::size_t>(rng.range(eps == 1 ? 2 : 5, 8));
  std::vector<Rational> sizes;
  for (std::size_t i = 0; i < n; ++i) {
    sizes.push_back(rng.below(4) == 0 ? make_rational(rng.range(10, 20), 20) : make_rational(rng.range(0, 3), 20));
  }
  std::vector<Rational> cost{Rational(0), Rational(1)};
  for (std::size_t j = 2; j <= n; ++j) cost.push_back(cost.back() + make_rational(rng.range(0, 2), 8));
  return {validate_instance(sizes, cost), eps};
}

TEST(Stage2Properties, CostRoundingSandwich) {
  testing::Rng rng(3);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.range(1, 12));
    const Instance inst = validate_instance(testing::random_sizes(rng, n), testing::random_monotone_cost(rng, n));
    const Rational eps = make_rational(1, rng.range(1, 4));
    const auto rc = round_cost_function(inst.cost(), eps);
    for (std::size_t j = 1; j <= n; ++j) {
      EXPECT_LE(inst.cost()(j), rc.g[j]);
      EXPECT_LE(rc.g[j], Rational((1 + eps) * inst.cost()(j)));
      EXPECT_LE(rc.g[j - 1], rc.g[j]);
      EXPECT_EQ(rc.g[rc.inverse(rc.g[j])], rc.g[j]);
      EXPECT_GE(rc.inverse(rc.g[j]), j);
    }
  }
}

TEST(Stage2Properties, BoundsAgainstOracle) {
  testing::Rng rng(19);
  int checked = 0;
  for (int round = 0; round < 60; ++round) {
    const auto [inst, eps] = dense_leaning(rng, round);
    const auto rc = round_cost_function(inst.cost(), eps);
    const Packing opt = brute_force_opt(inst);

    std::vector<ItemId> dense;
    Rational opt_dense(0);
    Rational omega(0);
    for (const auto& bin : opt.bins) {
      if (bin_density_class(bin.size(), eps) != Density::Dense) continue;
      dense.insert(dense.end(), bin.begin(), bin.end());
      opt_dense += inst.cost()(bin.size());
      omega = std::max(omega, rc.g[bin.size()]);
    }
    if (dense.empty()) continue;
    ++checked;
    std::sort(dense.begin(), dense.end());

    const auto split = split_small_large(inst, dense, eps);
    const auto grouping = linear_group_large(inst, split.large, eps);

    // rounded instance (first class removed) costs no more than the dense one
    std::vector<ItemId> rounded_ids;
    std::vector<Rational> rounded_sizes;
    for (std::size_t z = 0; z < grouping.sizes.size(); ++z) {
      for (ItemId id : grouping.items_by_size[z]) {
        rounded_ids.push_back(id);
        rounded_sizes.push_back(grouping.sizes[z]);
      }
    }
    for (ItemId id : split.small) {
      rounded_ids.push_back(id);
      rounded_sizes.push_back(inst.size_of(id));
    }
    std::vector<Rational> dense_sizes;
    for (ItemId id : dense) dense_sizes.push_back(inst.size_of(id));
    const Instance rounded = sub_instance(inst, rounded_ids, rounded_sizes);
    const Instance original = sub_instance(inst, dense, dense_sizes);
    EXPECT_LE(packing_cost(rounded, brute_force_opt(rounded)), packing_cost(original, brute_force_opt(original)));

    const auto configs = enumerate_dense_configurations(grouping, omega, rc, eps);
    const auto inv = static_cast<unsigned long>(inverse_epsilon(eps));
    std::size_t expensive = 0;
    for (const auto& c : configs) expensive += c.expensive ? 1 : 0;
    // (log_{1+eps}(1/phi) + 1) (1/eps + 1)^(1/eps^3 - 1), with the log rounded up
    const Rational phi = expensive_threshold_factor(eps);
    std::size_t log_levels = 0;
    for (Rational p(1); p < 1 / phi; p *= 1 + eps) ++log_levels;
    EXPECT_LE(Rational(static_cast<unsigned long>(expensive)),
              Rational((log_levels + 1) * pow(Rational(inv + 1), static_cast<unsigned>(inv * inv * inv - 1))));

    const auto milp = build_and_solve_dense_milp(inst, configs, grouping, split.small);
    ASSERT_EQ(milp.status, SolveStatus::Optimal);
    EXPECT_LE(milp.objective, Rational((1 + eps) * opt_dense));
    EXPECT_LE(milp.supplementary_cost, Rational(4 * eps * opt_dense));
    for (std::size_t c = 0; c < configs.size(); ++c) {
      EXPECT_LT(Rational(milp.v_rounded[c] - milp.v[c]), 1);
      if (configs[c].expensive) {
        EXPECT_TRUE(is_integral(milp.v[c]));
      }
    }

    const Stage2Result result = pack_dense(inst, dense, omega, eps, rc);
    ASSERT_EQ(result.status, SolveStatus::Optimal);
    EXPECT_TRUE(verify_packing(inst, result.packing, dense).ok()) << verify_packing(inst, result.packing, dense).describe();
    EXPECT_LE(result.removed_items, 2 * result.configured_bins);
    EXPECT_LE(Rational(static_cast<unsigned long>(result.overflow_bins)),
              Rational(2 * eps * static_cast<unsigned long>(result.configured_bins) + 1));
    EXPECT_EQ(result.first_class_size, grouping.first_class.size());
  }
  EXPECT_GT(checked, 20);
}

TEST(Stage2Properties, EveryOmegaYieldsFeasiblePackings) {
  testing::Rng rng(8);
  for (int round = 0; round < 30; ++round) {
    const auto [inst, eps] = dense_leaning(rng, round);
    const auto rc = round_cost_function(inst.cost(), eps);
    const auto ids = inst.all_ids();
    for (const Rational& omega : rc.levels) {
      const Stage2Result r = pack_dense(inst, ids, omega, eps, rc);
      if (r.status != SolveStatus::Optimal) continue;
      EXPECT_TRUE(verify_packing(inst, r.packing, ids).ok());
      for (std::size_t b = r.packing.bins.size() - r.first_class_size; b < r.packing.bins.size(); ++b) {
        EXPECT_EQ(r.packing.bins[b].size(), 1u);
      }
    }
  }
}

}  // namespace
}  // namespace gcbp
