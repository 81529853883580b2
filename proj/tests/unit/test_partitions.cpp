#include "skcc/generators.hpp"
#include "skcc/partitions.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace skcc;
namespace st = skcc::testing;

namespace {

st::CanonicalPartition canonical(const Partition& p) {
  st::CanonicalPartition out;
  for (const auto& cell : p.cells()) {
    auto members = cell.members();
    out.insert(std::set<int>(members.begin(), members.end()));
  }
  return out;
}

}  // namespace

TEST(EnumeratePartitions, Examples) {
  EXPECT_EQ(enumerate_partitions(3, 2).size(), 4U);
  const auto one = enumerate_partitions(1, 1);
  ASSERT_EQ(one.size(), 1U);
  EXPECT_EQ(one[0].to_string(), "{{1}}");
  EXPECT_EQ(enumerate_partitions(5, 2).size(), 51U);
}

TEST(EnumeratePartitions, CountsMatchBellNumbers) {
  for (int m = 1; m <= 8; ++m) {
    EXPECT_EQ(static_cast<long long>(enumerate_partitions(m, 1).size()), st::bell_number(m)) << m;
    if (m >= 2) {
      EXPECT_EQ(static_cast<long long>(enumerate_partitions(m, 2).size()), st::bell_number(m) - 1) << m;
    }
  }
}

TEST(EnumeratePartitions, EachCanonicalFormExactlyOnce) {
  for (int m = 2; m <= 8; ++m) {
    std::set<st::CanonicalPartition> seen;
    for (const auto& p : enumerate_partitions(m, 2)) EXPECT_TRUE(seen.insert(canonical(p)).second);
    if (m <= 6) {
      auto brute = st::all_partitions_brute(m);
      std::erase_if(brute, [](const auto& p) { return p.size() < 2; });
      EXPECT_EQ(seen, brute) << m;
    }
  }
}

TEST(EnumeratePartitions, RestrictedGrowthOrder) {
  for (int m = 2; m <= 6; ++m) {
    const auto all = enumerate_partitions(m, 1);
    for (std::size_t k = 1; k < all.size(); ++k) EXPECT_TRUE(rgs_less(all[k - 1], all[k]));
  }
}

TEST(EnumeratePartitions, MinCellsFilter) {
  for (int m = 1; m <= 7; ++m)
    for (int c = 1; c <= m; ++c) {
      std::size_t want = 0;
      for (const auto& p : enumerate_partitions(m, 1)) want += p.size() >= c;
      EXPECT_EQ(enumerate_partitions(m, c).size(), want);
    }
}

TEST(EnumeratePartitions, Cap) {
  EXPECT_THROW(enumerate_partitions(13, 2), CapError);
  EXPECT_THROW(enumerate_partitions(3, 0), std::invalid_argument);
  EXPECT_THROW(enumerate_partitions(3, 4), std::invalid_argument);
  long long n = 0;
  for_each_partition(12, 11, [&](std::span<const Subset>) { ++n; });
  EXPECT_EQ(n, 1 + 66);  // S plus one pair merged
}

TEST(EnumeratePartitions, ShardsCoverEverythingInOrder) {
  for (int m = 2; m <= 8; ++m) {
    const PartitionShards shards(m);
    std::vector<Partition> joined;
    for (std::size_t k = 0; k < shards.prefixes.size(); ++k)
      shards.walk_prefix(k, 2, [&](std::span<const Subset> cells) {
        joined.emplace_back(m, std::vector<Subset>(cells.begin(), cells.end()));
      });
    EXPECT_EQ(joined, enumerate_partitions(m, 2)) << m;
  }
}

TEST(Delta, Examples) {
  const auto k53 = PinSource(complete_uniform(5, 3)).oracle();
  EXPECT_EQ(delta(k53, singleton_partition(5)), 5);
  const auto path = PinSource(path_graph(3)).oracle();
  EXPECT_EQ(delta(path, singleton_partition(3)), 1);
  const auto ex = example1_source(3, 0.5).oracle();
  for (const auto& p : enumerate_partitions(3, 2)) EXPECT_NEAR(delta(ex, p), 1.0, 1e-9);
}

TEST(Delta, RejectsOneCell) {
  const auto o = PinSource(complete_uniform(3, 2)).oracle();
  EXPECT_THROW(delta(o, enumerate_partitions(3, 1).front()), std::invalid_argument);
}

TEST(Delta, TriangleMatchesMaterializedEntropies) {
  const auto tri = complete_uniform(3, 2);
  const auto o = PinSource(tri).oracle();
  for (const auto& p : enumerate_partitions(3, 2)) {
    const auto direct =
        st::delta_direct<Rational>(3, canonical(p), [&](Subset a) { return st::materialized_pin_entropy(tri, a); });
    EXPECT_EQ(delta(o, p), direct) << p.to_string();
  }
}

TEST(SpecialPartitions, Examples) {
  EXPECT_EQ(partition_from_subset({1, 2}, 4).to_string(), "{{1},{2},{3,4}}");
  EXPECT_EQ(singleton_partition(3).to_string(), "{{1},{2},{3}}");
  EXPECT_EQ(partition_from_subset({2}, 4).to_string(), "{{1,3,4},{2}}");
  EXPECT_EQ(canonical(partition_from_subset({2}, 4)), (st::CanonicalPartition{{2}, {1, 3, 4}}));
  EXPECT_THROW(partition_from_subset(Subset{}, 4), std::invalid_argument);
  EXPECT_THROW(partition_from_subset({1, 2, 3, 4}, 4), std::invalid_argument);
}

TEST(SpecialPartitions, FullMinusOneIsSingleton) {
  for (int m = 2; m <= 8; ++m)
    for (int drop = 1; drop <= m; ++drop)
      EXPECT_EQ(partition_from_subset(Subset::single(drop).complement(m), m), singleton_partition(m));
}

TEST(PartitionType, CanonicalizesAndValidates) {
  const Partition p(4, {Subset{3, 4}, Subset{1}, Subset{2}});
  EXPECT_EQ(p.to_string(), "{{1},{2},{3,4}}");
  EXPECT_EQ(p.rgs(), (std::vector<int>{0, 1, 2, 2}));
  EXPECT_THROW(Partition(4, {Subset{1, 2}, Subset{2, 3, 4}}), std::invalid_argument);
  EXPECT_THROW(Partition(4, {Subset{1, 2}, Subset{3}}), std::invalid_argument);
  EXPECT_THROW(Partition(3, {Subset{1, 2}, Subset{}, Subset{3}}), std::invalid_argument);
}
