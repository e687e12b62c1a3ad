#include <gtest/gtest.h>

#include <functional>

#include "gcbp/exact_poly.hpp"
#include "gcbp/oracle.hpp"
#include "matching_oracle.hpp"
#include "test_util.hpp"

namespace gcbp {
namespace {

using testing::make_instance;
using testing::R;

using testing::brute_force_matching_weights;

TEST(SolveK1, Examples) {
  const Instance linear = make_instance({"1/2", "1/2", "1/2"}, {"0", "1", "2", "3"});
  const Packing p = solve_k1(linear);
  EXPECT_EQ(p.bins.size(), 3u);
  EXPECT_EQ(packing_cost(linear, p), 3);

  const Instance empty = make_instance({}, {"0"});
  EXPECT_TRUE(solve_k1(empty).bins.empty());

  // forced on a k=2 instance: singletons cost 2, pairing the zeros costs 1
  const Instance zeros = make_instance({"0", "0"}, {"0", "1", "1"});
  EXPECT_THROW(solve_k1(zeros), Error);
  EXPECT_EQ(packing_cost(zeros, solve_k1(zeros, true)), 2);
  EXPECT_EQ(packing_cost(zeros, brute_force_opt(zeros)), 1);
}

TEST(Matching, Examples) {
  const Instance inst = make_instance({"3/5", "3/5", "3/10", "3/10"}, {"0", "1", "1", "1", "1"});
  const auto g = build_matching_graph(inst, inst.all_ids());
  const auto brute = brute_force_matching_weights(g);
  ASSERT_TRUE(brute[2].has_value());
  EXPECT_EQ(*brute[2], R("9/5"));  // frozen from the enumeration above

  const auto m2 = max_weight_matching_exact_size(g, 2);
  ASSERT_TRUE(m2.has_value());
  EXPECT_EQ(m2->weight, R("9/5"));
  EXPECT_EQ(m2->edges.size(), 2u);

  const auto m0 = max_weight_matching_exact_size(g, 0);
  ASSERT_TRUE(m0.has_value());
  EXPECT_EQ(m0->weight, 0);
  EXPECT_TRUE(m0->edges.empty());

  const Instance big = make_instance({"3/5", "3/5"}, {"0", "1", "1"});
  const auto g2 = build_matching_graph(big, big.all_ids());
  EXPECT_TRUE(g2.edges.empty());
  EXPECT_FALSE(max_weight_matching_exact_size(g2, 1).has_value());
}

TEST(Matching, AgreesWithEnumerationAndIsConcave) {
  testing::Rng rng(17);
  for (int round = 0; round < 150; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.range(1, 9));
    std::vector<Rational> cost(n + 1, Rational(1));
    cost[0] = 0;
    const Instance inst = validate_instance(testing::random_sizes(rng, n, 10), cost);
    const auto g = build_matching_graph(inst, inst.all_ids());
    const auto brute = brute_force_matching_weights(g);
    std::vector<std::optional<Rational>> dp(brute.size());
    for (std::size_t m = 0; m < brute.size(); ++m) {
      const auto got = max_weight_matching_exact_size(g, m);
      ASSERT_EQ(got.has_value(), brute[m].has_value()) << "m=" << m;
      if (!got) continue;
      EXPECT_EQ(got->weight, *brute[m]);
      EXPECT_EQ(got->edges.size(), m);
      Rational w(0);
      std::vector<char> seen(n, 0);
      for (const auto& [u, v] : got->edges) {
        EXPECT_LE(inst.size_of(u) + inst.size_of(v), 1);
        EXPECT_FALSE(seen[static_cast<std::size_t>(u)]++);
        EXPECT_FALSE(seen[static_cast<std::size_t>(v)]++);
        w += inst.size_of(u) + inst.size_of(v);
      }
      EXPECT_EQ(w, got->weight);
      dp[m] = got->weight;
    }
    for (std::size_t m = 1; m + 1 < dp.size(); ++m) {
      if (dp[m - 1] && dp[m] && dp[m + 1]) {
        EXPECT_LE(*dp[m - 1] + *dp[m + 1], 2 * *dp[m]);
      }
    }
  }
}

TEST(SolveK2, Examples) {
  const Instance four = make_instance({"3/5", "3/5", "3/10", "3/10"}, {"0", "1", "6/5", "19/10", "3"});
  const Packing p = solve_k2(four);
  EXPECT_TRUE(verify_packing(four, p).ok());
  EXPECT_EQ(packing_cost(four, p), R("12/5"));
  EXPECT_EQ(testing::exhaustive_opt(four), R("12/5"));
  EXPECT_EQ(p.bins.size(), 2u);

  const Instance one = make_instance({"1"}, {"0", "1"});
  EXPECT_EQ(packing_cost(one, solve_k2(one, true)), 1);

  const Instance three = make_instance({"1/4", "1/4", "1/4"}, {"0", "1", "6/5", "19/10"});
  const Packing t = solve_k2(three);
  EXPECT_EQ(packing_cost(three, t), R("19/10"));
  EXPECT_EQ(testing::exhaustive_opt(three), R("19/10"));
  EXPECT_EQ(t.bins.size(), 1u);
}

TEST(SolveK2, WrongClassUnlessForced) {
  const Instance flat = make_instance({"1/4", "1/4", "1/4"}, {"0", "1", "1", "1"});
  EXPECT_THROW(solve_k2(flat), Error);
  EXPECT_TRUE(verify_packing(flat, solve_k2(flat, true)).ok());
}

TEST(SolveK2, GuessSpace) {
  for (std::size_t n = 0; n <= 9; ++n) {
    for (const auto& g : enumerate_k2_guesses(n)) {
      EXPECT_EQ(g.rho_s + g.rho_ell + g.rho_p, n);
      EXPECT_EQ(g.rho_p % 2, 0u);
      EXPECT_TRUE(g.rho_ell == 0 || (g.rho_ell >= 3 && g.rho_ell % 2 == 1));
    }
  }
  EXPECT_EQ(enumerate_k2_guesses(0).size(), 1u);
}

TEST(SolveK2, MatchesOracleOnRandomK2Instances) {
  testing::Rng rng(23);
  for (int round = 0; round < 60; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.range(2, 8));
    const Instance inst = validate_instance(testing::random_sizes(rng, n, 8), testing::random_k2_cost(rng, n));
    ASSERT_EQ(minimizer_k(inst.cost()).verdict, Verdict::PolyK2);
    const Packing p = solve_k2(inst);
    EXPECT_TRUE(verify_packing(inst, p).ok());
    EXPECT_EQ(packing_cost(inst, p), packing_cost(inst, brute_force_opt(inst)));
  }
}

}  // namespace
}  // namespace gcbp
