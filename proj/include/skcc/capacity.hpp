#pragma once

// Secret-key capacity I(X_M) two ways: minimum of Delta over partitions with
// at least two cells, and H(X_M) minus the fractional-partition LP optimum.
// Also R_CO, the uniform weight lambda~, the face-restricted conditional
// value I(X_M | L), and the clubbing relation.

#include "skcc/errors.hpp"
#include "skcc/model.hpp"
#include "skcc/partitions.hpp"
#include "skcc/scalar.hpp"
#include "skcc/simplex.hpp"
#include "skcc/subset.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <thread>
#include <tuple>
#include <type_traits>
#include <vector>

namespace skcc {

inline constexpr int kMaxLpTerminals = 10;
inline constexpr std::size_t kDefaultMinimizerLimit = 64;

struct LexLess {
  bool operator()(Subset a, Subset b) const { return lex_less(a, b); }
};

// Sparse weights over nonempty proper subsets B of {1..m}; absent = 0.
template <typename Scalar>
class LambdaVector {
 public:
  explicit LambdaVector(int m) : m_(m) {
    if (m < 2) throw std::invalid_argument("lambda vectors need m >= 2");
  }

  int m() const { return m_; }

  void set(Subset b, Scalar w) {
    if (b.empty() || !b.within(m_) || b == Subset::full(m_))
      throw std::invalid_argument("lambda index {" + b.to_string() + "} is not a nonempty proper subset");
    if (w == 0) weights_.erase(b);
    else weights_[b] = std::move(w);
  }
  Scalar get(Subset b) const {
    auto it = weights_.find(b);
    return it == weights_.end() ? Scalar(0) : it->second;
  }
  const std::map<Subset, Scalar, LexLess>& weights() const { return weights_; }

  // Nonnegative and, for every terminal i, sum of lambda_B over B containing
  // i equals 1.
  bool is_feasible() const {
    std::vector<Scalar> cover(m_ + 1, Scalar(0));
    for (const auto& [b, w] : weights_) {
      if (ScalarTraits<Scalar>::less(w, Scalar(0))) return false;
      for (int v : b.members()) cover[v] += w;
    }
    for (int i = 1; i <= m_; ++i)
      if (!ScalarTraits<Scalar>::equal(cover[i], Scalar(1))) return false;
    return true;
  }

 private:
  int m_;
  std::map<Subset, Scalar, LexLess> weights_;
};

template <typename Scalar>
struct CapacityReport {
  Scalar joint_entropy{};
  Scalar i_capacity{};
  Scalar r_co{};
  std::vector<Partition> minimizers;  // canonical order, at most the limit
  std::size_t minimizer_count = 0;    // all minimizers, including truncated ones
  std::optional<Scalar> lp_value;
  std::optional<LambdaVector<Scalar>> lambda_star_witness;

  bool truncated() const { return minimizer_count > minimizers.size(); }
};

struct CapacityOptions {
  std::size_t minimizer_limit = kDefaultMinimizerLimit;  // 0 keeps every minimizer
  int threads = 1;
  bool allow_large = false;
  bool with_lp = false;
};

namespace detail {

// (surplus, cells - 1) pairs compared as the ratio surplus / (cells - 1).
// Exact integer entropies take a 128-bit fast path.
template <typename Scalar>
struct DeltaArith {
  using Value = Scalar;
  // -1, 0, +1 for a/da vs b/db (tolerance-aware on the binary64 path)
  static int compare(const Value& a, int da, const Value& b, int db) {
    if constexpr (ScalarTraits<Scalar>::exact) {
      const Value l = a * db;
      const Value r = b * da;
      return l < r ? -1 : (r < l ? 1 : 0);
    } else {
      const double x = a / da;
      const double y = b / db;
      if (ScalarTraits<double>::less(x, y)) return -1;
      if (ScalarTraits<double>::less(y, x)) return 1;
      return 0;
    }
  }
  // Raw order used to locate the minimum itself.
  static bool before(const Value& a, int da, const Value& b, int db) {
    if constexpr (ScalarTraits<Scalar>::exact) return compare(a, da, b, db) < 0;
    else return a / da < b / db;
  }
  static Scalar ratio(const Value& a, int da) { return a / Scalar(da); }
};

struct IntegerDeltaArith {
  using Value = long long;
  static int compare(long long a, int da, long long b, int db) {
    const __int128 l = static_cast<__int128>(a) * db;
    const __int128 r = static_cast<__int128>(b) * da;
    return l < r ? -1 : (r < l ? 1 : 0);
  }
  static bool before(long long a, int da, long long b, int db) { return compare(a, da, b, db) < 0; }
};

template <typename Value, typename Compare, typename Before>
struct MinimizerSearch {
  int m;
  int threads;
  std::size_t limit;
  const std::vector<Value>& table;
  Compare compare;  // tie test: int(const Value&, int, const Value&, int)
  Before before;    // strict order used to find the minimum

  struct Found {
    std::size_t prefix;
    std::size_t order;
    std::vector<Subset> cells;
  };

  Value surplus(std::span<const Subset> cells) const {
    Value s = -table.back();
    for (auto c : cells) s += table[c.bits()];
    return s;
  }

  // Pass 1: minimum ratio. Pass 2: every partition tying with it.
  std::pair<std::pair<Value, int>, std::pair<std::size_t, std::vector<Found>>> run() const {
    const PartitionShards shards(m);
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(shards.prefixes.size())));

    std::vector<std::optional<std::pair<Value, int>>> best(workers);
    parallel(workers, [&](int w) {
      for (std::size_t p = w; p < shards.prefixes.size(); p += workers) {
        shards.walk_prefix(p, 2, [&](std::span<const Subset> cells) {
          Value s = surplus(cells);
          const int d = static_cast<int>(cells.size()) - 1;
          if (!best[w] || before(s, d, best[w]->first, best[w]->second)) best[w] = std::make_pair(s, d);
        });
      }
    });
    std::optional<std::pair<Value, int>> global;
    for (auto& b : best)
      if (b && (!global || before(b->first, b->second, global->first, global->second))) global = b;

    std::vector<std::vector<Found>> found(workers);
    std::vector<std::size_t> counts(workers, 0);
    parallel(workers, [&](int w) {
      for (std::size_t p = w; p < shards.prefixes.size(); p += workers) {
        std::size_t order = 0;
        std::size_t kept_here = 0;
        shards.walk_prefix(p, 2, [&](std::span<const Subset> cells) {
          const std::size_t idx = order++;
          Value s = surplus(cells);
          if (compare(s, static_cast<int>(cells.size()) - 1, global->first, global->second) != 0) return;
          ++counts[w];
          if (limit == 0 || kept_here < limit) {
            found[w].push_back(Found{p, idx, std::vector<Subset>(cells.begin(), cells.end())});
            ++kept_here;
          }
        });
      }
    });
    std::vector<Found> merged;
    std::size_t total = 0;
    for (int w = 0; w < workers; ++w) {
      total += counts[w];
      for (auto& f : found[w]) merged.push_back(std::move(f));
    }
    std::sort(merged.begin(), merged.end(),
              [](const Found& a, const Found& b) { return std::tie(a.prefix, a.order) < std::tie(b.prefix, b.order); });
    if (limit != 0 && merged.size() > limit) merged.resize(limit);
    return {*global, {total, std::move(merged)}};
  }

  template <typename Body>
  static void parallel(int workers, const Body& body) {
    if (workers == 1) {
      body(0);
      return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back([&body, w] { body(w); });
    for (auto& t : pool) t.join();
  }
};

template <typename Scalar>
bool all_small_integers(const std::vector<Scalar>& table) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    for (const auto& v : table) {
      if (boost::multiprecision::denominator(v) != 1) return false;
      const auto& n = boost::multiprecision::numerator(v);
      if (n > BigInt(1LL << 40) || n < BigInt(-(1LL << 40))) return false;
    }
    return true;
  } else {
    return false;
  }
}

}  // namespace detail

// I(X_M) = min over partitions P with |P| >= 2 of Delta(P), with the set of
// minimizers and R_CO = H(X_M) - I(X_M).
template <typename Scalar>
CapacityReport<Scalar> sk_capacity(const EntropyOracle<Scalar>& oracle, const CapacityOptions& options = {});

// Fractional-partition LP: H(X_M) - max_{lambda in Lambda} sum_B lambda_B H(X_B | X_{B^c}).
template <typename Scalar>
struct LpCapacity {
  Scalar value{};
  LambdaVector<Scalar> witness;
};

namespace detail {

template <typename Scalar>
struct LambdaLp {
  int m;
  std::vector<std::uint64_t> columns;  // subset bits of each variable
  std::vector<std::vector<Scalar>> a;
  std::vector<Scalar> b;

  explicit LambdaLp(int m_) : m(m_) {
    const std::uint64_t full = Subset::full(m).bits();
    for (std::uint64_t bits = 1; bits < full; ++bits) columns.push_back(bits);
    a.assign(m, std::vector<Scalar>(columns.size(), Scalar(0)));
    for (std::size_t j = 0; j < columns.size(); ++j)
      for (int v : Subset(columns[j]).members()) a[v - 1][j] = Scalar(1);
    b.assign(m, Scalar(1));
  }

  LambdaVector<Scalar> to_lambda(const std::vector<Scalar>& x) const {
    LambdaVector<Scalar> out(m);
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] != 0) out.set(Subset(columns[j]), x[j]);
    return out;
  }
};

inline void check_lp_cap(int m) {
  if (m < 2) throw std::invalid_argument("the capacity LP needs m >= 2");
  if (m > kMaxLpTerminals)
    throw CapError("the capacity LP is capped at m <= " + std::to_string(kMaxLpTerminals) + " (got m = " + std::to_string(m) + ")");
}

}  // namespace detail

template <typename Scalar>
LpCapacity<Scalar> lp_capacity(const EntropyOracle<Scalar>& oracle) {
  const int m = oracle.m();
  detail::check_lp_cap(m);
  const auto table = oracle.table();
  const Scalar joint = table.back();
  detail::LambdaLp<Scalar> lp(m);
  std::vector<Scalar> c(lp.columns.size());
  const std::uint64_t full = Subset::full(m).bits();
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = joint - table[full & ~lp.columns[j]];
  auto sol = solve_lp(lp.a, lp.b, c);
  if (sol.status != LpStatus::optimal)
    throw InternalError("capacity LP reported " + std::string(sol.status == LpStatus::infeasible ? "infeasible" : "unbounded") +
                        "; lambda~ is always feasible");
  return LpCapacity<Scalar>{joint - sol.value, lp.to_lambda(sol.x)};
}

template <typename Scalar>
CapacityReport<Scalar> sk_capacity(const EntropyOracle<Scalar>& oracle, const CapacityOptions& options) {
  const int m = oracle.m();
  if (m < 2) throw std::invalid_argument("SK capacity needs m >= 2");
  check_enumeration_cap(m, options.allow_large);
  const auto table = oracle.table();

  CapacityReport<Scalar> report;
  report.joint_entropy = table.back();

  auto fill = [&](auto&& search, auto&& to_scalar) {
    auto [best, found] = search.run();
    report.i_capacity = to_scalar(best.first, best.second);
    report.minimizer_count = found.first;
    for (auto& f : found.second) report.minimizers.emplace_back(m, std::move(f.cells));
  };

  bool integral = false;
  if constexpr (std::is_same_v<Scalar, Rational>) {
    integral = detail::all_small_integers(table);
    if (integral) {
      std::vector<long long> ints;
      ints.reserve(table.size());
      for (const auto& v : table) ints.push_back(boost::multiprecision::numerator(v).template convert_to<long long>());
      using Arith = detail::IntegerDeltaArith;
      detail::MinimizerSearch<long long, decltype(&Arith::compare), decltype(&Arith::before)> search{
          m, options.threads, options.minimizer_limit, ints, &Arith::compare, &Arith::before};
      fill(search, [](long long s, int d) { return Scalar(Rational(s, d)); });
    }
  }
  if (!integral) {
    using Arith = detail::DeltaArith<Scalar>;
    detail::MinimizerSearch<Scalar, decltype(&Arith::compare), decltype(&Arith::before)> search{
        m, options.threads, options.minimizer_limit, table, &Arith::compare, &Arith::before};
    fill(search, [](const Scalar& s, int d) { return Arith::ratio(s, d); });
  }
  if (ScalarTraits<Scalar>::less(report.i_capacity, Scalar(0)))
    throw InternalError("partition minimum is negative; the oracle is not submodular");
  report.r_co = report.joint_entropy - report.i_capacity;

  if (options.with_lp) {
    auto lp = lp_capacity(oracle);
    if (!ScalarTraits<Scalar>::exact ? std::fabs(ScalarTraits<Scalar>::to_double(lp.value - report.i_capacity)) > 1e-7
                                     : !ScalarTraits<Scalar>::equal(lp.value, report.i_capacity))
      throw InternalError("LP value " + render_scalar(lp.value) + " disagrees with the partition minimum " +
                          render_scalar(report.i_capacity));
    report.lp_value = lp.value;
    report.lambda_star_witness = std::move(lp.witness);
  }
  return report;
}

// lambda~_B = 1/(m-1) for |B| = m-1, 0 otherwise.
template <typename Scalar = Rational>
LambdaVector<Scalar> lambda_tilde(int m) {
  LambdaVector<Scalar> out(m);
  for (int i = 1; i <= m; ++i) out.set(Subset::single(i).complement(m), Scalar(1) / Scalar(m - 1));
  return out;
}

template <typename Scalar>
struct LambdaVerdict {
  bool feasible = false;
  Scalar objective{};  // H(X_M) - sum_B lambda_B H(X_B | X_{B^c})
  bool optimal = false;
  Scalar optimum{};
};

template <typename Scalar>
LambdaVerdict<Scalar> verify_lambda(const EntropyOracle<Scalar>& oracle, const LambdaVector<Scalar>& lambda) {
  if (lambda.m() != oracle.m())
    throw std::invalid_argument("lambda has m = " + std::to_string(lambda.m()) + " but the source has m = " +
                                std::to_string(oracle.m()));
  const int m = oracle.m();
  LambdaVerdict<Scalar> out;
  out.feasible = lambda.is_feasible();
  const Scalar joint = oracle.joint();
  out.objective = joint;
  for (const auto& [b, w] : lambda.weights()) out.objective -= w * (joint - oracle.entropy(b.complement(m)));
  if (m <= kMaxLpTerminals) {
    out.optimum = lp_capacity(oracle).value;
  } else {
    out.optimum = sk_capacity(oracle, CapacityOptions{1, 1, false, false}).i_capacity;
  }
  if constexpr (ScalarTraits<Scalar>::exact) {
    out.optimal = out.feasible && out.objective == out.optimum;
  } else {
    out.optimal = out.feasible && std::fabs(out.objective - out.optimum) <= 1e-7;
  }
  return out;
}

// I(X_M | L) at n = 1: the maximum over optimal lambda of
// H(X_M | L) - sum_B lambda_B H(X_B | X_{B^c}, L). The optimal face is the
// first LP's feasible set plus the equality pinning its objective to the
// optimum. Entropies are binary64 values taken exactly into rationals, so
// both LPs run in exact arithmetic on that data.
inline double conditional_sk_value(const FunctionObservable& obs) {
  const int m = obs.space().m();
  detail::check_lp_cap(m);
  const std::uint64_t full = Subset::full(m).bits();
  std::vector<Rational> h(full + 1), hl(full + 1);
  for (std::uint64_t bits = 0; bits <= full; ++bits) {
    h[bits] = exact_rational(obs.source_entropy(Subset(bits)));
    hl[bits] = exact_rational(obs.joint_entropy(Subset(bits)));
  }
  detail::LambdaLp<Rational> lp(m);
  std::vector<Rational> c(lp.columns.size()), d(lp.columns.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto comp = full & ~lp.columns[j];
    c[j] = h[full] - h[comp];
    d[j] = hl[comp] - hl[full];  // maximizing -sum_B lambda_B H(X_B | X_{B^c}, L)
  }
  auto first = solve_lp(lp.a, lp.b, c);
  if (first.status != LpStatus::optimal) throw InternalError("capacity LP is not optimal");
  auto a = lp.a;
  a.push_back(c);
  auto b = lp.b;
  b.push_back(first.value);
  auto face = solve_lp(a, b, d);
  if (face.status != LpStatus::optimal) throw InternalError("optimal-face LP is not optimal");
  const Rational conditional_joint = hl[full] - hl[0];  // H(X_M | L)
  const double value = Rational(conditional_joint + face.value).convert_to<double>();
  if (value < -kTolerance) throw InternalError("I(X_M | L) came out negative: " + render_real(value));
  return value < 0.0 ? 0.0 : value;
}

template <typename Scalar>
struct ClubRelation {
  Scalar i_x{};
  Scalar i_y{};
  Scalar i_z{};
  bool equality = false;          // I(Z) == I(X) + I(Y)
  bool shared_minimizer = false;  // minimizer sets intersect
  bool superadditive = false;     // I(Z) >= I(X) + I(Y)
  std::vector<Partition> shared;  // common minimizers, canonical order

  bool consistent() const { return superadditive && equality == shared_minimizer; }
};

template <typename Scalar>
ClubRelation<Scalar> club_relation(const EntropyOracle<Scalar>& x, const EntropyOracle<Scalar>& y, int threads = 1) {
  auto z = club(x, y);
  CapacityOptions all;
  all.minimizer_limit = 0;
  all.threads = threads;
  const auto rx = sk_capacity(x, all);
  const auto ry = sk_capacity(y, all);
  const auto rz = sk_capacity(z, all);
  ClubRelation<Scalar> out;
  out.i_x = rx.i_capacity;
  out.i_y = ry.i_capacity;
  out.i_z = rz.i_capacity;
  const Scalar sum = out.i_x + out.i_y;
  out.equality = ScalarTraits<Scalar>::equal(out.i_z, sum);
  out.superadditive = ScalarTraits<Scalar>::less_equal(sum, out.i_z);
  for (const auto& p : rx.minimizers)
    if (std::find(ry.minimizers.begin(), ry.minimizers.end(), p) != ry.minimizers.end()) out.shared.push_back(p);
  out.shared_minimizer = !out.shared.empty();
  return out;
}

}  // namespace skcc
