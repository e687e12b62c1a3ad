#include <gtest/gtest.h>

#include <algorithm>

#include "gcbp/core.hpp"
#include "test_util.hpp"

namespace gcbp {
namespace {

using testing::bins1;
using testing::make_instance;
using testing::R;
using testing::Rs;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::InvalidArgument;
}

TEST(Rational, ParsesAndCanonicalizes) {
  EXPECT_EQ(R("2/4"), make_rational(1, 2));
  EXPECT_EQ(R("3"), Rational(3));
  EXPECT_EQ(R("-6/8"), make_rational(-3, 4));
  EXPECT_EQ(to_string(R("10/4")), "5/2");
  EXPECT_EQ(kind_of([] { R("1/0"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { R("1.5"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { R("1/-2"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { R(""); }), ErrorKind::ParseError);
}

TEST(Rational, InverseEpsilon) {
  EXPECT_EQ(inverse_epsilon(R("1/2")), 2);
  EXPECT_EQ(inverse_epsilon(R("1")), 1);
  EXPECT_EQ(kind_of([] { inverse_epsilon(R("2/3")); }), ErrorKind::BadEpsilon);
  EXPECT_EQ(kind_of([] { inverse_epsilon(R("2")); }), ErrorKind::BadEpsilon);
  EXPECT_EQ(kind_of([] { inverse_epsilon(R("0")); }), ErrorKind::BadEpsilon);
}

TEST(ValidateInstance, NormalizesByFOne) {
  const Instance inst = make_instance({"1/2", "1/2"}, {"0", "2", "3"});
  ASSERT_EQ(inst.cost().table().size(), 3u);
  EXPECT_EQ(inst.cost()(0), 0);
  EXPECT_EQ(inst.cost()(1), 1);
  EXPECT_EQ(inst.cost()(2), R("3/2"));
  EXPECT_EQ(inst.cost().normalization_factor(), 2);
}

TEST(ValidateInstance, AcceptsZeroAndFullItems) {
  const Instance inst = make_instance({"0", "1"}, {"0", "1", "1"});
  EXPECT_EQ(inst.size(), 2u);
  EXPECT_EQ(inst.size_of(0), 0);
  EXPECT_EQ(inst.size_of(1), 1);
}

TEST(ValidateInstance, Errors) {
  EXPECT_EQ(kind_of([] { make_instance({"3/2"}, {"0", "1"}); }), ErrorKind::SizeOutOfRange);
  EXPECT_EQ(kind_of([] { make_instance({"-1/2"}, {"0", "1"}); }), ErrorKind::SizeOutOfRange);
  EXPECT_EQ(kind_of([] { make_instance({"1/2", "1/2"}, {"0", "2", "1"}); }), ErrorKind::NonMonotoneCost);
  EXPECT_EQ(kind_of([] { make_instance({"1/2"}, {"1", "2"}); }), ErrorKind::BadAnchor);
  EXPECT_EQ(kind_of([] { make_instance({"1/2", "1/2"}, {"0", "0", "1"}); }), ErrorKind::BadAnchor);
  EXPECT_EQ(kind_of([] { make_instance({"1/2"}, {"0", "1", "1"}); }), ErrorKind::InvalidArgument);
}

TEST(ValidateInstance, EmptyInstance) {
  const Instance inst = make_instance({}, {"0"});
  EXPECT_TRUE(inst.empty());
  EXPECT_EQ(packing_cost(inst, Packing{}), 0);
  EXPECT_TRUE(verify_packing(inst, Packing{}).ok());
}

TEST(PackingCost, Examples) {
  const Instance flat = make_instance({"1/2", "1/2", "1/2", "1/2"}, {"0", "1", "1", "1", "1"});
  EXPECT_EQ(packing_cost(flat, bins1({{1, 2}, {3, 4}})), 2);

  const Instance k2 = make_instance({"3/5", "3/5", "3/10", "3/10"}, {"0", "1", "6/5", "19/10", "3"});
  EXPECT_EQ(packing_cost(k2, bins1({{1, 3}, {2, 4}})), R("12/5"));

  const Instance linear = make_instance({"1/3", "1/3", "1/3"}, {"0", "1", "2", "3"});
  EXPECT_EQ(packing_cost(linear, bins1({{1}, {2}, {3}})), 3);
}

TEST(VerifyPacking, Examples) {
  const Instance over = make_instance({"3/5", "3/5"}, {"0", "1", "1"});
  const auto bad = verify_packing(over, bins1({{1, 2}}));
  ASSERT_EQ(bad.overfull.size(), 1u);
  EXPECT_EQ(bad.overfull[0].total, R("6/5"));
  EXPECT_FALSE(bad.ok());

  const Instance halves = make_instance({"1/2", "1/2"}, {"0", "1", "1"});
  EXPECT_TRUE(verify_packing(halves, bins1({{1}, {2}})).ok());

  const auto missing = verify_packing(halves, bins1({{1}}));
  EXPECT_EQ(missing.missing, std::vector<ItemId>{1});
  EXPECT_EQ(missing.describe(), "item 2 unpacked");
}

TEST(VerifyPacking, DuplicatesEmptyAndUnknown) {
  const Instance halves = make_instance({"1/2", "1/2"}, {"0", "1", "1"});
  const auto dup = verify_packing(halves, bins1({{1, 2}, {2}, {}}));
  EXPECT_EQ(dup.duplicated, std::vector<ItemId>{1});
  EXPECT_EQ(dup.empty_bins, 1u);
  const auto unknown = verify_packing(halves, bins1({{1, 2, 3}}));
  EXPECT_EQ(unknown.unknown, std::vector<ItemId>{2});

  // restricted to a subset, other ids count as unknown
  const std::vector<ItemId> only_first{0};
  EXPECT_TRUE(verify_packing(halves, bins1({{1}}), only_first).ok());
  EXPECT_FALSE(verify_packing(halves, bins1({{1}, {2}}), only_first).ok());
}

TEST(BinDensity, Threshold) {
  EXPECT_EQ(bin_density_class(4, R("1/2")), Density::Sparse);
  EXPECT_EQ(bin_density_class(5, R("1/2")), Density::Dense);
  EXPECT_EQ(bin_density_class(1, R("1")), Density::Sparse);
  EXPECT_EQ(bin_density_class(2, R("1")), Density::Dense);
  EXPECT_EQ(kind_of([] { bin_density_class(3, R("2/5")); }), ErrorKind::BadEpsilon);
}

TEST(CoreProperties, CostInvariantsOnRandomPackings) {
  testing::Rng rng(7);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = static_cast<std::size_t>(rng.range(1, 7));
    const auto raw_cost = testing::random_monotone_cost(rng, n);
    const Instance inst = validate_instance(testing::random_sizes(rng, n, 6), raw_cost);

    // random assignment to bins, ignoring capacity
    Packing p;
    p.bins.assign(n, {});
    for (ItemId id = 0; id < static_cast<ItemId>(n); ++id) p.bins[rng.below(n)].push_back(id);
    p.bins.erase(std::remove_if(p.bins.begin(), p.bins.end(), [](const auto& b) { return b.empty(); }),
                 p.bins.end());

    const Rational cost = packing_cost(inst, p);
    Packing shuffled = p;
    std::reverse(shuffled.bins.begin(), shuffled.bins.end());
    for (auto& bin : shuffled.bins) std::reverse(bin.begin(), bin.end());
    EXPECT_EQ(packing_cost(inst, shuffled), cost);
    EXPECT_GE(cost, Rational(static_cast<unsigned long>(p.bins.size())));

    // raw-scale cost is the normalized cost times the factor
    Rational raw(0);
    for (const auto& bin : p.bins) raw += raw_cost[bin.size()];
    EXPECT_EQ(inst.cost().to_raw(cost), raw);

    // OK iff every bin fits, recomputed by hand
    bool fits = true;
    for (const auto& bin : p.bins) fits = fits && bin_load(inst, bin) <= 1;
    EXPECT_EQ(verify_packing(inst, p).ok(), fits);
  }
}

}  // namespace
}  // namespace gcbp
