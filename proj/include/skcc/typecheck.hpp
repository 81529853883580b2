#pragma once

// Type-S decision (is the singleton partition a Delta minimizer?), the
// closed-form gaps for complete uniform hypergraphs, R_SK for Type-S uniform
// PIN models, and the empirical check of sum_i I(X_i; L) <= t H(L).

#include "skcc/capacity.hpp"
#include "skcc/errors.hpp"
#include "skcc/hypergraph.hpp"
#include "skcc/model.hpp"
#include "skcc/partitions.hpp"
#include "skcc/scalar.hpp"
#include "skcc/subset.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace skcc {

inline constexpr int kMaxTypeSTerminals = 20;

template <typename Scalar>
struct TypeSVerdict {
  bool is_minimizer = false;
  bool is_unique = false;
  std::optional<Subset> worst_b;  // set when the smallest gap is <= 0
  Scalar delta_s{};               // Delta(S)
  Scalar min_gap{};               // min over B of Delta(P_B) - Delta(S)
  Subset min_gap_b;               // lexicographically smallest B attaining min_gap
};

// Compares Delta(S) against Delta(P_B) for every B with 1 <= |B| <= m-2.
template <typename Scalar>
TypeSVerdict<Scalar> is_type_s(const EntropyOracle<Scalar>& oracle) {
  using T = ScalarTraits<Scalar>;
  const int m = oracle.m();
  if (m < 3) throw std::invalid_argument("the Type-S test needs m >= 3; inspect the partition minimizers instead");
  if (m > kMaxTypeSTerminals)
    throw CapError("the Type-S test is capped at m <= " + std::to_string(kMaxTypeSTerminals) + " (got m = " + std::to_string(m) + ")");

  const Scalar joint = oracle.joint();
  std::vector<Scalar> single(m + 1);
  Scalar singles_sum(0);
  for (int i = 1; i <= m; ++i) {
    single[i] = oracle.entropy(Subset::single(i));
    singles_sum += single[i];
  }
  TypeSVerdict<Scalar> out;
  out.delta_s = (singles_sum - joint) / Scalar(m - 1);

  bool have = false;
  const std::uint64_t full = Subset::full(m).bits();
  for (std::uint64_t bits = 1; bits < full; ++bits) {
    const Subset b(bits);
    const int size = b.size();
    if (size > m - 2) continue;
    Scalar surplus = oracle.entropy(b.complement(m)) - joint;
    for (int v : b.members()) surplus += single[v];
    const Scalar gap = surplus / Scalar(size) - out.delta_s;
    bool take = !have;
    if (have) {
      if (T::exact ? gap < out.min_gap : gap < out.min_gap && !T::equal(gap, out.min_gap)) take = true;
      else if (T::equal(gap, out.min_gap) && lex_less(b, out.min_gap_b)) take = true;
    }
    if (take) {
      out.min_gap = gap;
      out.min_gap_b = b;
      have = true;
    }
  }
  out.is_minimizer = T::less_equal(Scalar(0), out.min_gap);
  out.is_unique = T::less(Scalar(0), out.min_gap);
  if (!out.is_unique) out.worst_b = out.min_gap_b;
  return out;
}

// Delta(P_B) - Delta(S) on K_{m,t} for |B| = b, in closed form.
inline Rational complete_uniform_gap(int m, int t, int b) {
  if (t < 2 || t > m - 1) throw std::invalid_argument("complete_uniform_gap needs 2 <= t <= m-1");
  if (b < 1 || b > m - 2) throw std::invalid_argument("complete_uniform_gap needs 1 <= b <= m-2");
  BigInt top = binomial(m - 2, t - 1);
  if (b >= t) top -= binomial(b - 1, t - 1);
  return Rational(top, BigInt(t));
}

struct RskResult {
  Rational r_sk;
  Rational r_co;
  int m = 0;
  int t = 0;
  int edge_count = 0;
  bool cross_checked = false;  // r_co compared against the partition minimum
};

// R_SK = R_CO = (m - t)/(m - 1) |E| for a Type-S t-uniform PIN model.
inline RskResult rsk_uniform_pin(const Hypergraph& h, int threads = 1) {
  const int m = h.m();
  const auto t = h.uniform_size();
  if (!t) throw PreconditionError("hypergraph is not uniform; the closed-form R_SK applies only to t-uniform hypergraphs");
  if (*t < 2) throw PreconditionError("hyperedges have size " + std::to_string(*t) + "; the closed-form R_SK needs t >= 2");
  if (m > kMaxTypeSTerminals) throw CapError("R_SK needs the Type-S test, capped at m <= " + std::to_string(kMaxTypeSTerminals));

  const auto oracle = PinSource(h).oracle();
  if (m >= 3) {
    const auto verdict = is_type_s(oracle);
    if (!verdict.is_minimizer)
      throw PreconditionError("source is not Type S: Delta(P_B) < Delta(S) for B = {" + verdict.worst_b->to_string() +
                              "}; the closed-form R_SK does not apply");
  }
  // m == 2: S is the only partition with two or more cells.

  RskResult out;
  out.m = m;
  out.t = *t;
  out.edge_count = h.edge_count();
  out.r_sk = Rational(BigInt(m - *t) * h.edge_count(), BigInt(m - 1));
  out.r_co = out.r_sk;
  if (m <= kMaxEnumerationTerminals) {
    CapacityOptions opts;
    opts.threads = threads;
    const auto report = sk_capacity(oracle, opts);
    if (report.r_co != out.r_sk)
      throw InternalError("closed-form R_SK " + to_fraction_string(out.r_sk) + " disagrees with R_CO " +
                          to_fraction_string(report.r_co) + " from partition minimization");
    out.cross_checked = true;
  }
  return out;
}

struct Lemma2Case {
  std::string name;
  double label_entropy = 0.0;      // H(L)
  double total_information = 0.0;  // sum_i I(X_i; L)
  double bound = 0.0;              // t H(L)
  bool violation = false;
};

struct Lemma2Report {
  int t = 0;
  int trials = 0;
  int counted = 0;           // trials with H(L) > 0
  double max_ratio = 0.0;    // max of sum_i I(X_i; L) / (t H(L))
  int violations = 0;        // sum_i I(X_i; L) > t H(L) + 1e-9
  std::vector<Lemma2Case> structured;
};

inline Lemma2Case lemma2_case(const FunctionObservable& obs, int t, std::string name) {
  const auto stats = observable_stats(obs);
  Lemma2Case c;
  c.name = std::move(name);
  c.label_entropy = stats.label_entropy;
  c.total_information = stats.total_information();
  c.bound = t * stats.label_entropy;
  c.violation = c.total_information > c.bound + kTolerance;
  return c;
}

// Random label map: label count uniform in [2, 8], each outcome labelled
// uniformly at random. Trial k draws from its own stream seeded by (seed, k).
inline FunctionObservable random_observable(const OutcomeSpace& space, std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  const auto labels = std::uniform_int_distribution<std::uint32_t>(2, 8)(rng);
  std::uniform_int_distribution<std::uint32_t> pick(0, labels - 1);
  std::vector<std::uint32_t> out(space.size());
  for (auto& l : out) l = pick(rng);
  return FunctionObservable(space, std::move(out));
}

inline Lemma2Report lemma2_check(const Hypergraph& h, int trials, std::uint64_t seed, bool structured = false,
                                 int threads = 1) {
  const auto t = h.uniform_size();
  if (!t) throw std::invalid_argument("lemma2_check needs a uniform hypergraph");
  if (trials < 1) throw std::invalid_argument("lemma2_check needs trials >= 1");
  const auto space = OutcomeSpace::from_pin(h);

  std::vector<Lemma2Case> cases(trials);
  const int workers = std::max(1, std::min(threads, trials));
  auto body = [&](int w) {
    for (int k = w; k < trials; k += workers)
      cases[k] = lemma2_case(random_observable(space, seed, static_cast<std::uint64_t>(k)), *t, "random");
  };
  if (workers == 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body, w);
    for (auto& th : pool) th.join();
  }

  Lemma2Report out;
  out.t = *t;
  out.trials = trials;
  for (const auto& c : cases) {
    out.violations += c.violation;
    if (c.label_entropy > kTolerance) {
      ++out.counted;
      out.max_ratio = std::max(out.max_ratio, c.total_information / c.bound);
    }
  }
  if (structured) {
    out.structured.push_back(lemma2_case(FunctionObservable::identity(space), *t, "identity"));
    out.structured.push_back(lemma2_case(FunctionObservable::constant(space), *t, "constant"));
    for (int e = 0; e < h.edge_count(); ++e) {
      std::string name = "edge(";
      for (int v : h.edges()[e]) name += std::to_string(v) + (v == h.edges()[e].back() ? "" : ",");
      out.structured.push_back(lemma2_case(FunctionObservable::pin_edge(space, e), *t, name + ")"));
    }
    for (const auto& c : out.structured) {
      out.violations += c.violation;
      if (c.label_entropy > kTolerance) out.max_ratio = std::max(out.max_ratio, c.total_information / c.bound);
    }
  }
  return out;
}

}  // namespace skcc
