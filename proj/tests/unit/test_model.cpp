#include "skcc/generators.hpp"
#include "skcc/model.hpp"
#include "skcc/typecheck.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace skcc;
using skcc::testing::materialized_pin_entropy;

namespace {

Hypergraph triangle() { return complete_uniform(3, 2); }

}  // namespace

TEST(LoadHypergraph, CompleteUniformFollowsTableOne) {
  const auto h = load_hypergraph("5\n3 4 5\n1 2 3\n1 2 4\n1 2 5\n1 3 4\n1 3 5\n1 4 5\n2 3 4\n2 3 5\n2 4 5\n");
  ASSERT_EQ(h.m(), 5);
  ASSERT_EQ(h.edge_count(), 10);
  const std::vector<std::vector<int>> table_one = {{1, 2, 3}, {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {1, 3, 5},
                                                   {1, 4, 5}, {2, 3, 4}, {2, 3, 5}, {2, 4, 5}, {3, 4, 5}};
  EXPECT_EQ(h.edges(), table_one);
}

TEST(LoadHypergraph, SmallestLegalInput) {
  const auto h = load_hypergraph("1\n1");
  EXPECT_EQ(h.m(), 1);
  ASSERT_EQ(h.edge_count(), 1);
  EXPECT_EQ(h.edges()[0], std::vector<int>{1});
}

TEST(LoadHypergraph, DuplicatesArePreserved) {
  const auto h = load_hypergraph("3\n1 2\n1 2");
  EXPECT_EQ(h.m(), 3);
  EXPECT_EQ(h.edge_count(), 2);
  EXPECT_EQ(PinSource(h).oracle().joint(), 2);
}

TEST(LoadHypergraph, CommentsAndBlankLines) {
  const auto h = load_hypergraph("# triangle\n\n3  # terminals\n1 2\n# skip\n1 3\n2 3\n");
  EXPECT_EQ(h, triangle());
}

TEST(LoadHypergraph, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      load_hypergraph(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("3\n1 2\n1 x\n"), 3);        // malformed
  EXPECT_EQ(line_of("3\n1 4\n"), 2);             // out of range
  EXPECT_EQ(line_of("3\n1 2\n2 2\n"), 3);        // repeated vertex
  EXPECT_EQ(line_of("# c\n0\n"), 2);             // m < 1
  EXPECT_EQ(line_of("3\n2 1\n"), 2);             // not increasing
  EXPECT_THROW(load_hypergraph("3\n"), ParseError);   // no hyperedges
  EXPECT_THROW(load_hypergraph(""), ParseError);
  EXPECT_THROW(load_hypergraph("3 4\n1 2\n"), ParseError);
}

TEST(SubsetEntropy, CompleteUniform) {
  const auto o = PinSource(complete_uniform(5, 3)).oracle();
  EXPECT_EQ(o.entropy({1}), 6);
  EXPECT_EQ(o.entropy({1, 2, 3, 4, 5}), 10);
  EXPECT_EQ(o.entropy(Subset{}), 0);
  EXPECT_THROW(o.entropy({6}), std::out_of_range);
}

TEST(SubsetEntropy, TabularEmptySetIsZero) {
  EXPECT_EQ(example1_source(3, 0.3).oracle().entropy(Subset{}), 0.0);
}

TEST(ConditionalEntropy, Examples) {
  const auto o = PinSource(triangle()).oracle();
  EXPECT_EQ(o.conditional({1, 2}, {3}), 1);
  EXPECT_EQ(o.conditional({1}, {1, 2}), 0);
  EXPECT_EQ(o.conditional({2, 3}, {1, 2, 3}), 0);
  const auto ex = example1_source(3, 0.5).oracle();
  EXPECT_NEAR(ex.conditional({1}, {2}), 1.0, 1e-9);
  EXPECT_THROW(o.conditional({4}, {1}), std::out_of_range);
}

TEST(Club, TwoSingleEdges) {
  const auto x = PinSource(load_hypergraph("2\n1 2\n")).oracle();
  const auto z = club(x, x);
  EXPECT_EQ(z.entropy({1, 2}), 2);
}

TEST(Club, ZeroSourceIsIdentity) {
  const auto x = PinSource(complete_uniform(4, 2)).oracle();
  const auto z = club(x, zero_oracle<Rational>(4));
  for (std::uint64_t bits = 0; bits < 16; ++bits) EXPECT_EQ(z.entropy(Subset(bits)), x.entropy(Subset(bits)));
}

TEST(Club, ExampleTwoJointEntropy) {
  const auto x = example1_source(3, 0.5).oracle();
  const auto y = to_real(PinSource(triangle()).oracle());
  EXPECT_NEAR(club(x, y).joint(), 7.0, 1e-9);  // (3 + h(1/2)) + 3
}

TEST(Club, ExampleTwoMatchesProductPmf) {
  // The clubbed source as an explicit product pmf: X from Example 1 and the
  // triangle's three edge bits, Z_i = (X_i, bits seen by i).
  const auto ex = example1_source(3, 0.5);
  const auto tri = triangle();
  std::vector<std::pair<TabularSource::Outcome, double>> pmf;
  for (std::size_t k = 0; k < ex.outcomes().size(); ++k) {
    for (std::uint32_t bits = 0; bits < 8; ++bits) {
      TabularSource::Outcome z(3);
      for (int i = 0; i < 3; ++i) {
        std::uint32_t seen = 0;
        int slot = 0;
        for (int j = 0; j < 3; ++j)
          if (tri.edge_masks()[j].contains(i + 1)) seen |= ((bits >> j) & 1U) << slot++;
        z[i] = ex.outcomes()[k][i] * 4 + seen;
      }
      pmf.emplace_back(z, ex.probabilities()[k] / 8.0);
    }
  }
  const TabularSource product({16, 16, 16}, std::move(pmf));
  const auto z = club(ex.oracle(), to_real(PinSource(tri).oracle()));
  for (std::uint64_t bits = 1; bits < 8; ++bits)
    EXPECT_NEAR(z.entropy(Subset(bits)), product.marginal_entropy(Subset(bits)), 1e-9);
  EXPECT_NEAR(product.marginal_entropy(Subset::full(3)), 7.0, 1e-9);
}

TEST(Club, MismatchedM) {
  EXPECT_THROW(club(zero_oracle<Rational>(3), zero_oracle<Rational>(4)), std::invalid_argument);
}

TEST(Club, AdditivityOnRandomPairs) {
  std::mt19937_64 rng(7001);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + trial % 5;
    const auto x = PinSource(skcc::testing::random_hypergraph(rng, m, 5)).oracle();
    const auto y = PinSource(skcc::testing::random_hypergraph(rng, m, 5)).oracle();
    const auto z = club(x, y);
    for (std::uint64_t bits = 0; bits < (1U << m); ++bits)
      ASSERT_EQ(z.entropy(Subset(bits)), x.entropy(Subset(bits)) + y.entropy(Subset(bits)));
  }
}

TEST(ExampleOne, Examples) {
  EXPECT_NEAR(example1_source(3, 0.5).oracle().entropy({1, 2}), 3.0, 1e-9);
  EXPECT_NEAR(example1_source(3, 0.0).oracle().entropy({1, 2, 3}), 3.0, 1e-9);
  // direct entropy of the four-point marginal (3/8, 3/8, 1/8, 1/8)
  const double direct = -2 * 0.375 * std::log2(0.375) - 2 * 0.125 * std::log2(0.125);
  EXPECT_NEAR(example1_source(4, 0.25).oracle().entropy({1}), direct, 1e-9);
  EXPECT_NEAR(direct, 1.8112781, 1e-7);
}

TEST(ExampleOne, Errors) {
  EXPECT_THROW(example1_source(3, -0.1), std::invalid_argument);
  EXPECT_THROW(example1_source(3, 1.5), std::invalid_argument);
  EXPECT_THROW(example1_source(1, 0.5), std::invalid_argument);
}

TEST(ExampleOne, ClosedFormAllSubsets) {
  for (int m = 2; m <= 5; ++m) {
    for (double p : {0.0, 0.1, 0.25, 0.5}) {
      const auto o = example1_source(m, p).oracle();
      double hp = 0.0;
      if (p > 0) hp = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
      for (std::uint64_t bits = 1; bits < (1U << m); ++bits)
        ASSERT_NEAR(o.entropy(Subset(bits)), Subset(bits).size() + hp, 1e-9) << "m=" << m << " p=" << p;
    }
  }
}

TEST(ObservableStats, TriangleIdentity) {
  const auto obs = FunctionObservable::identity(OutcomeSpace::from_pin(triangle()));
  const auto s = observable_stats(obs);
  EXPECT_NEAR(s.label_entropy, 3.0, 1e-12);
  EXPECT_NEAR(s.total_information(), 6.0, 1e-12);
}

TEST(ObservableStats, Constant) {
  const auto s = observable_stats(FunctionObservable::constant(OutcomeSpace::from_tabular(example1_source(3, 0.2))));
  EXPECT_EQ(s.label_entropy, 0.0);
  for (double v : s.terminal_information) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(ObservableStats, SingleEdgeBit) {
  const auto obs = FunctionObservable::pin_edge(OutcomeSpace::from_pin(triangle()), 0);  // xi_(12)
  const auto s = observable_stats(obs);
  EXPECT_NEAR(s.label_entropy, 1.0, 1e-12);
  ASSERT_EQ(s.terminal_information.size(), 3U);
  EXPECT_NEAR(s.terminal_information[0], 1.0, 1e-12);
  EXPECT_NEAR(s.terminal_information[1], 1.0, 1e-12);
  EXPECT_NEAR(s.terminal_information[2], 0.0, 1e-12);
}

TEST(ObservableStats, MapNotTotal) {
  EXPECT_THROW(FunctionObservable(OutcomeSpace::from_pin(triangle()), std::vector<std::uint32_t>(7, 0)),
               std::invalid_argument);
}

TEST(ObservableStats, LabelEntropyBoundedBySource) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = skcc::testing::random_hypergraph(rng, 4, 6);
    const auto space = OutcomeSpace::from_pin(h);
    const auto obs = random_observable(space, 99, trial);
    EXPECT_LE(obs.joint_entropy({}), static_cast<double>(h.edge_count()) + 1e-9);
  }
}

TEST(OutcomeSpace, PinCap) {
  std::vector<Hypergraph::Edge> edges(25, {1, 2});
  EXPECT_THROW(OutcomeSpace::from_pin(Hypergraph(2, edges)), CapError);
}

namespace {

TabularSource bits_xyz(const std::function<int(int, int, int)>& z_of, bool z_free = false) {
  std::vector<std::pair<TabularSource::Outcome, double>> pmf;
  for (std::uint32_t x = 0; x < 2; ++x)
    for (std::uint32_t y = 0; y < 2; ++y) {
      if (z_free) {
        for (std::uint32_t z = 0; z < 2; ++z) pmf.push_back({{x, y, z}, 0.125});
      } else {
        pmf.push_back({{x, y, static_cast<std::uint32_t>(z_of(x, y, 0))}, 0.25});
      }
    }
  return TabularSource({2, 2, 2}, std::move(pmf));
}

}  // namespace

TEST(ConditionalMutualInformation, Examples) {
  const auto indep = bits_xyz(nullptr, true);
  EXPECT_NEAR(conditional_mutual_information(indep, {1}, {3}), 0.0, 1e-12);
  const auto copy = bits_xyz([](int x, int, int) { return x; });
  EXPECT_NEAR(conditional_mutual_information(copy, {1}, {3}), 1.0, 1e-12);
  const auto xor_ = bits_xyz([](int x, int y, int) { return x ^ y; });
  EXPECT_NEAR(conditional_mutual_information(xor_, {1}, {3}), 0.0, 1e-12);
  EXPECT_NEAR(conditional_mutual_information(xor_, {1}, {3}, {2}), 1.0, 1e-12);
  EXPECT_THROW(conditional_mutual_information(xor_, {1, 2}, {2}), std::invalid_argument);
}

TEST(ConditionalMutualInformation, LemmaRv1OnRandomPmfs) {
  // X independent of Y, Z arbitrary given (X, Y): I(X;Z) + I(Y;Z) <= I(X,Y;Z).
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint32_t> alpha(2, 3);
  for (int trial = 0; trial < 600; ++trial) {
    const std::uint32_t ax = alpha(rng), ay = alpha(rng), az = alpha(rng);
    const auto px = skcc::testing::dirichlet_one(rng, ax);
    const auto py = skcc::testing::dirichlet_one(rng, ay);
    std::vector<std::pair<TabularSource::Outcome, double>> pmf;
    for (std::uint32_t x = 0; x < ax; ++x)
      for (std::uint32_t y = 0; y < ay; ++y) {
        const auto pz = skcc::testing::dirichlet_one(rng, az);
        for (std::uint32_t z = 0; z < az; ++z) pmf.push_back({{x, y, z}, px[x] * py[y] * pz[z]});
      }
    const TabularSource t({ax, ay, az}, std::move(pmf));
    const double lhs = conditional_mutual_information(t, {1}, {3}) + conditional_mutual_information(t, {2}, {3});
    const double rhs = conditional_mutual_information(t, {1, 2}, {3});
    ASSERT_LE(lhs, rhs + 1e-9) << "trial " << trial;
  }
}

TEST(ConditionalMutualInformation, LemmaRv2OnRandomPmfs) {
  // X, Y, W mutually independent, Z arbitrary given (X, Y, W):
  // I(X;Z|W) <= I(X;Z|W,Y).
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<std::uint32_t> alpha(2, 3);
  for (int trial = 0; trial < 600; ++trial) {
    const std::uint32_t ax = alpha(rng), ay = alpha(rng), aw = alpha(rng), az = alpha(rng);
    const auto px = skcc::testing::dirichlet_one(rng, ax);
    const auto py = skcc::testing::dirichlet_one(rng, ay);
    const auto pw = skcc::testing::dirichlet_one(rng, aw);
    std::vector<std::pair<TabularSource::Outcome, double>> pmf;
    for (std::uint32_t x = 0; x < ax; ++x)
      for (std::uint32_t y = 0; y < ay; ++y)
        for (std::uint32_t w = 0; w < aw; ++w) {
          const auto pz = skcc::testing::dirichlet_one(rng, az);
          for (std::uint32_t z = 0; z < az; ++z) pmf.push_back({{x, y, w, z}, px[x] * py[y] * pw[w] * pz[z]});
        }
    const TabularSource t({ax, ay, aw, az}, std::move(pmf));
    const double lhs = conditional_mutual_information(t, {1}, {4}, {3});
    const double rhs = conditional_mutual_information(t, {1}, {4}, {2, 3});
    ASSERT_LE(lhs, rhs + 1e-9) << "trial " << trial;
  }
}

TEST(PinOracle, MatchesMaterializedDistribution) {
  std::mt19937_64 rng(4242);
  for (int m = 1; m <= 4; ++m) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto h = skcc::testing::random_hypergraph(rng, m, 4);
      const auto o = PinSource(h).oracle();
      for (std::uint64_t bits = 0; bits < (1U << m); ++bits)
        ASSERT_EQ(o.entropy(Subset(bits)), materialized_pin_entropy(h, Subset(bits)));
    }
  }
}

TEST(Oracle, MonotoneAndSubmodular) {
  std::mt19937_64 rng(99);
  auto check = [](const auto& o, double tol) {
    const int m = o.m();
    for (std::uint64_t a = 0; a < (1U << m); ++a)
      for (std::uint64_t b = 0; b < (1U << m); ++b) {
        const Subset sa(a), sb(b);
        const double ha = ScalarTraits<std::decay_t<decltype(o.entropy(sa))>>::to_double(o.entropy(sa));
        const double hb = ScalarTraits<std::decay_t<decltype(o.entropy(sa))>>::to_double(o.entropy(sb));
        const double hu = ScalarTraits<std::decay_t<decltype(o.entropy(sa))>>::to_double(o.entropy(sa | sb));
        const double hi = ScalarTraits<std::decay_t<decltype(o.entropy(sa))>>::to_double(o.entropy(sa & sb));
        if (sa.is_subset_of(sb)) {
          ASSERT_LE(ha, hb + tol);
        }
        ASSERT_GE(ha + hb + tol, hu + hi);
      }
  };
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + trial % 5;
    check(PinSource(skcc::testing::random_hypergraph(rng, m, 8)).oracle(), 0.0);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3;
    check(skcc::testing::random_tabular(rng, std::vector<std::uint32_t>(m, 2 + trial % 2)).oracle(), 1e-9);
  }
}

TEST(LoadPmf, ParsesDecimalsAndFractions) {
  const auto t = load_pmf("# two fair bits, equal\n2 2 2\n0 0 1/2\n1 1 0.5\n");
  EXPECT_EQ(t.m(), 2);
  EXPECT_NEAR(t.oracle().joint(), 1.0, 1e-12);
}

TEST(LoadPmf, Errors) {
  EXPECT_THROW(load_pmf("2 2 2\n0 0 1/2\n1 1 1/3\n"), ParseError);  // exact sum must be 1
  EXPECT_THROW(load_pmf("2 2 2\n0 0 0.5\n1 1 0.4\n"), ParseError);
  EXPECT_THROW(load_pmf("2 2 2\n0 2 1\n"), ParseError);
  EXPECT_THROW(load_pmf("2 2 2\n0 0 -1\n1 1 2\n"), ParseError);
  EXPECT_THROW(load_pmf("2 2 2\n0 0 1/2\n0 0 1/2\n"), ParseError);
  EXPECT_THROW(load_pmf("2 2\n0 0 1\n"), ParseError);
  EXPECT_THROW(load_pmf(""), ParseError);
}

TEST(TabularSource, RoundTripsThroughText) {
  const auto t = example1_source(3, 0.1);
  const auto back = load_pmf(t.to_text("example"));
  for (std::uint64_t bits = 1; bits < 8; ++bits)
    EXPECT_NEAR(back.marginal_entropy(Subset(bits)), t.marginal_entropy(Subset(bits)), 1e-12);
}

TEST(ParseRational, DecimalsAndFractions) {
  EXPECT_EQ(parse_rational("0.1125"), Rational(9, 80));
  EXPECT_EQ(parse_rational("010/020"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-07/8"), Rational(-7, 8));
  EXPECT_EQ(parse_rational("00.000"), 0);
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("2.5E1"), 25);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1.2.3"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1e"), std::invalid_argument);
}
