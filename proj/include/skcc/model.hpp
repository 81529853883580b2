#pragma once

// Sources and their entropy oracles.
//
// Every quantity is a per-copy rate (n = 1), in bits. A PIN source on a
// hypergraph has H(X_A) = number of hyperedges meeting A, an exact integer;
// a tabular source carries an explicit joint pmf and its entropies are
// binary64.

#include "skcc/errors.hpp"
#include "skcc/hypergraph.hpp"
#include "skcc/scalar.hpp"
#include "skcc/subset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace skcc {

// Largest m for which an oracle will materialize its full 2^m table.
inline constexpr int kMaxTableTerminals = 20;

// Subset -> H(X_A). Immutable; safe to share across threads.
template <typename Scalar>
class EntropyOracle {
 public:
  using Function = std::function<Scalar(Subset)>;

  EntropyOracle(int m, Function fn) : m_(m), fn_(std::make_shared<const Function>(std::move(fn))) {
    if (m < 1 || m > kMaxTerminals) throw std::invalid_argument("oracle needs 1 <= m <= " + std::to_string(kMaxTerminals));
  }

  int m() const { return m_; }

  Scalar entropy(Subset a) const {
    if (!a.within(m_)) throw std::out_of_range("subset {" + a.to_string() + "} not within [1, " + std::to_string(m_) + "]");
    if (a.empty()) return Scalar(0);
    return (*fn_)(a);
  }
  Scalar operator()(Subset a) const { return entropy(a); }

  // H(X_A | X_B) = H(X_{A u B}) - H(X_B).
  Scalar conditional(Subset a, Subset b) const {
    if (!a.within(m_) || !b.within(m_)) throw std::out_of_range("subset not within [1, " + std::to_string(m_) + "]");
    return entropy(a | b) - entropy(b);
  }

  Scalar joint() const { return entropy(Subset::full(m_)); }

  // H indexed by subset bits, for all 2^m subsets.
  std::vector<Scalar> table() const {
    if (m_ > kMaxTableTerminals) throw CapError("entropy table needs m <= " + std::to_string(kMaxTableTerminals));
    std::vector<Scalar> out(std::size_t{1} << m_);
    for (std::uint64_t bits = 1; bits < out.size(); ++bits) out[bits] = (*fn_)(Subset(bits));
    return out;
  }

 private:
  int m_;
  std::shared_ptr<const Function> fn_;
};

using PinOracle = EntropyOracle<Rational>;
using RealOracle = EntropyOracle<double>;

inline RealOracle to_real(const PinOracle& exact) {
  return RealOracle(exact.m(), [exact](Subset a) { return exact.entropy(a).convert_to<double>(); });
}
inline RealOracle to_real(const RealOracle& x) { return x; }

template <typename Scalar>
EntropyOracle<Scalar> zero_oracle(int m) {
  return EntropyOracle<Scalar>(m, [](Subset) { return Scalar(0); });
}

// Clubbed source Z_i = (X_i, Y_i) with X independent of Y:
// H(Z_A) = H(X_A) + H(Y_A).
template <typename Scalar>
EntropyOracle<Scalar> club(const EntropyOracle<Scalar>& x, const EntropyOracle<Scalar>& y) {
  if (x.m() != y.m())
    throw std::invalid_argument("cannot club sources with m = " + std::to_string(x.m()) + " and m = " + std::to_string(y.m()));
  return EntropyOracle<Scalar>(x.m(), [x, y](Subset a) { return x.entropy(a) + y.entropy(a); });
}

class PinSource {
 public:
  explicit PinSource(Hypergraph h) : h_(std::move(h)) {}

  const Hypergraph& hypergraph() const { return h_; }
  int m() const { return h_.m(); }

  PinOracle oracle() const {
    auto h = std::make_shared<const Hypergraph>(h_);
    return PinOracle(h_.m(), [h](Subset a) { return Rational(h->incident_count(a)); });
  }

 private:
  Hypergraph h_;
};

// Shannon entropy, in bits, of a distribution given by its masses.
template <typename Range>
double shannon_entropy(const Range& masses) {
  double h = 0.0;
  for (double p : masses)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

// A joint pmf over m finite coordinates. Outcomes with zero mass may be
// omitted; duplicate outcomes are merged.
class TabularSource {
 public:
  using Outcome = std::vector<std::uint32_t>;

  TabularSource(std::vector<std::uint32_t> alphabet_sizes, std::vector<std::pair<Outcome, double>> pmf)
      : alphabet_(std::move(alphabet_sizes)) {
    if (alphabet_.empty()) throw std::invalid_argument("tabular source needs m >= 1");
    if (static_cast<int>(alphabet_.size()) > kMaxTerminals) throw CapError("tabular source m exceeds cap");
    for (auto a : alphabet_)
      if (a == 0) throw std::invalid_argument("alphabet sizes must be positive");
    std::map<Outcome, double> merged;
    double total = 0.0;
    for (auto& [x, p] : pmf) {
      if (x.size() != alphabet_.size()) throw std::invalid_argument("outcome arity does not match m");
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= alphabet_[i]) throw std::invalid_argument("symbol out of range for coordinate " + std::to_string(i + 1));
      if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
      merged[x] += p;
      total += p;
    }
    if (std::fabs(total - 1.0) > kTolerance) throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
    for (auto& [x, p] : merged) {
      if (p <= 0.0) continue;
      outcomes_.push_back(x);
      probs_.push_back(p);
    }
  }

  int m() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<std::uint32_t>& alphabet_sizes() const { return alphabet_; }
  const std::vector<Outcome>& outcomes() const { return outcomes_; }
  const std::vector<double>& probabilities() const { return probs_; }

  // Mixed-radix code of the restriction of outcome `k` to A.
  std::uint64_t key(Subset a, std::size_t k) const {
    std::uint64_t code = 0;
    for (int v : a.members()) code = code * alphabet_[v - 1] + outcomes_[k][v - 1];
    return code;
  }

  // Number of distinct codes key(A, .) can take.
  std::uint64_t key_range(Subset a) const {
    long double r = 1;
    std::uint64_t out = 1;
    for (int v : a.members()) {
      r *= alphabet_[v - 1];
      out *= alphabet_[v - 1];
    }
    if (r > 9.2e18L) throw CapError("joint alphabet on {" + a.to_string() + "} too large");
    return out;
  }

  // Shannon entropy of the marginal on A.
  double marginal_entropy(Subset a) const {
    if (!a.within(m())) throw std::out_of_range("subset {" + a.to_string() + "} not within [1, " + std::to_string(m()) + "]");
    if (a.empty()) return 0.0;
    key_range(a);
    std::unordered_map<std::uint64_t, double> mass;
    for (std::size_t k = 0; k < outcomes_.size(); ++k) mass[key(a, k)] += probs_[k];
    std::vector<double> ps;
    ps.reserve(mass.size());
    for (auto& kv : mass) ps.push_back(kv.second);
    std::sort(ps.begin(), ps.end());
    return shannon_entropy(ps);
  }

  RealOracle oracle() const {
    auto self = std::make_shared<const TabularSource>(*this);
    if (m() <= 16) {
      auto table = std::make_shared<std::vector<double>>(std::size_t{1} << m());
      for (std::uint64_t bits = 1; bits < table->size(); ++bits) (*table)[bits] = marginal_entropy(Subset(bits));
      return RealOracle(m(), [table](Subset a) { return (*table)[a.bits()]; });
    }
    return RealOracle(m(), [self](Subset a) { return self->marginal_entropy(a); });
  }

  std::string to_text(std::string_view comment = {}) const {
    std::string out;
    if (!comment.empty()) out += "# " + std::string(comment) + "\n";
    out += std::to_string(m());
    for (auto a : alphabet_) out += " " + std::to_string(a);
    out += '\n';
    char buf[64];
    for (std::size_t k = 0; k < outcomes_.size(); ++k) {
      for (auto s : outcomes_[k]) out += std::to_string(s) + " ";
      std::snprintf(buf, sizeof buf, "%.17g", probs_[k]);
      out += buf;
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::uint32_t> alphabet_;
  std::vector<Outcome> outcomes_;
  std::vector<double> probs_;
};

// Parses the pmf text format: "m a_1 .. a_m" then lines "x_1 .. x_m p"
// with 0-based symbols and p a decimal or "num/den". When every p is given
// as num/den the total must be exactly 1, otherwise within 1e-9.
inline TabularSource load_pmf(std::string_view text) {
  std::vector<std::uint32_t> alphabet;
  bool have_header = false;
  bool all_fractions = true;
  Rational total = 0;
  std::vector<std::pair<TabularSource::Outcome, double>> pmf;
  std::map<TabularSource::Outcome, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto tokens = detail::split_ws(detail::strip_comment(raw));
    if (tokens.empty()) continue;
    if (!have_header) {
      auto m = detail::parse_int(tokens[0], line_no);
      if (m < 1) throw ParseError(line_no, "m must be >= 1");
      if (m > kMaxTerminals) throw ParseError(line_no, "m exceeds the cap of " + std::to_string(kMaxTerminals));
      if (static_cast<long long>(tokens.size()) != m + 1)
        throw ParseError(line_no, "header must list m alphabet sizes");
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        auto a = detail::parse_int(tokens[k], line_no);
        if (a < 1 || a > (1LL << 31)) throw ParseError(line_no, "alphabet size must be positive");
        alphabet.push_back(static_cast<std::uint32_t>(a));
      }
      have_header = true;
      continue;
    }
    if (tokens.size() != alphabet.size() + 1)
      throw ParseError(line_no, "expected " + std::to_string(alphabet.size()) + " symbols and a probability");
    TabularSource::Outcome x;
    for (std::size_t k = 0; k < alphabet.size(); ++k) {
      auto s = detail::parse_int(tokens[k], line_no);
      if (s < 0 || s >= alphabet[k])
        throw ParseError(line_no, "symbol " + std::to_string(s) + " out of range for coordinate " + std::to_string(k + 1));
      x.push_back(static_cast<std::uint32_t>(s));
    }
    Rational p;
    try {
      p = parse_rational(tokens.back());
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    if (p < 0) throw ParseError(line_no, "negative probability");
    if (tokens.back().find('/') == std::string_view::npos) all_fractions = false;
    if (auto [it, fresh] = seen.emplace(x, line_no); !fresh)
      throw ParseError(line_no, "outcome repeats line " + std::to_string(it->second));
    total += p;
    pmf.emplace_back(std::move(x), p.convert_to<double>());
  }
  if (!have_header) throw ParseError(0, "missing header line");
  if (pmf.empty()) throw ParseError(0, "pmf has no outcomes");
  if (all_fractions ? total != 1 : std::fabs(total.convert_to<double>() - 1.0) > kTolerance)
    throw ParseError(0, "probabilities sum to " + to_fraction_string(total) + ", not 1");
  return TabularSource(std::move(alphabet), std::move(pmf));
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Hidden bit W ~ Ber(p); given W = w each X_i is uniform on {2w, 2w+1}
// (the two-bit strings w0, w1) independently. H(X_A) = |A| + h(p).
inline TabularSource example1_source(int m, double p) {
  if (m < 2) throw std::invalid_argument("example1 source needs m >= 2");
  if (m > 16) throw CapError("example1 source needs m <= 16");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  std::vector<std::pair<TabularSource::Outcome, double>> pmf;
  const double half_pow = std::ldexp(1.0, -m);
  for (int w = 0; w < 2; ++w) {
    const double pw = w == 0 ? 1.0 - p : p;
    if (pw <= 0.0) continue;
    for (std::uint32_t low = 0; low < (1U << m); ++low) {
      TabularSource::Outcome x(m);
      for (int i = 0; i < m; ++i) x[i] = 2U * w + ((low >> i) & 1U);
      pmf.emplace_back(std::move(x), pw * half_pow);
    }
  }
  return TabularSource(std::vector<std::uint32_t>(m, 4), std::move(pmf));
}

// I(X;Z|W) over coordinate sets of a joint pmf.
inline double conditional_mutual_information(const TabularSource& pmf, Subset x, Subset z, Subset w = {}) {
  if (x.intersects(z) || x.intersects(w) || z.intersects(w))
    throw std::invalid_argument("coordinate sets must be disjoint");
  const double v = pmf.marginal_entropy(x | w) + pmf.marginal_entropy(z | w) - pmf.marginal_entropy(x | z | w) -
                   pmf.marginal_entropy(w);
  return v < 0.0 ? 0.0 : v;
}

// ---------------------------------------------------------------------------
// Explicit outcome spaces at n = 1, for quantities involving a function L
// of the whole source.

inline constexpr int kMaxPinOutcomeBits = 24;

class OutcomeSpace {
 public:
  static OutcomeSpace from_pin(const Hypergraph& h) {
    if (h.edge_count() > kMaxPinOutcomeBits)
      throw CapError("outcome enumeration needs |E| <= " + std::to_string(kMaxPinOutcomeBits) + ", got " +
                     std::to_string(h.edge_count()));
    OutcomeSpace s;
    s.m_ = h.m();
    s.edges_ = h.edge_count();
    s.size_ = std::size_t{1} << s.edges_;
    s.terminal_bits_.assign(h.m() + 1, 0);
    for (int j = 0; j < h.edge_count(); ++j)
      for (int v : h.edges()[j]) s.terminal_bits_[v] |= std::uint64_t{1} << j;
    return s;
  }

  static OutcomeSpace from_tabular(const TabularSource& t) {
    OutcomeSpace s;
    s.m_ = t.m();
    s.size_ = t.outcomes().size();
    s.tabular_ = std::make_shared<const TabularSource>(t);
    return s;
  }

  int m() const { return m_; }
  std::size_t size() const { return size_; }
  bool is_pin() const { return tabular_ == nullptr; }
  int pin_edge_count() const { return edges_; }

  double prob(std::size_t k) const {
    return is_pin() ? std::ldexp(1.0, -edges_) : tabular_->probabilities()[k];
  }

  // Equal keys iff equal values of X_A at the two outcomes.
  std::uint64_t key(Subset a, std::size_t k) const {
    if (is_pin()) return static_cast<std::uint64_t>(k) & edge_bits(a);
    return tabular_->key(a, k);
  }
  std::uint64_t key_range(Subset a) const {
    if (is_pin()) return std::uint64_t{1} << edges_;
    return tabular_->key_range(a);
  }

  // Edges (as bits of the outcome index) seen by the terminals in A.
  std::uint64_t edge_bits(Subset a) const {
    std::uint64_t bits = 0;
    for (int v : a.members()) bits |= terminal_bits_[v];
    return bits;
  }

 private:
  OutcomeSpace() = default;
  int m_ = 0;
  int edges_ = 0;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> terminal_bits_;
  std::shared_ptr<const TabularSource> tabular_;
};

// A deterministic label L(outcome) on every outcome of a source.
class FunctionObservable {
 public:
  FunctionObservable(OutcomeSpace space, std::vector<std::uint32_t> labels)
      : space_(std::move(space)), labels_(std::move(labels)) {
    if (labels_.size() != space_.size())
      throw std::invalid_argument("observable map is not total: " + std::to_string(labels_.size()) + " labels for " +
                                  std::to_string(space_.size()) + " outcomes");
    for (auto l : labels_) label_count_ = std::max<std::uint64_t>(label_count_, std::uint64_t{l} + 1);
  }

  static FunctionObservable from_function(OutcomeSpace space, const std::function<std::uint32_t(std::size_t)>& f) {
    std::vector<std::uint32_t> labels(space.size());
    for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = f(k);
    return FunctionObservable(std::move(space), std::move(labels));
  }
  static FunctionObservable identity(OutcomeSpace space) {
    return from_function(std::move(space), [](std::size_t k) { return static_cast<std::uint32_t>(k); });
  }
  static FunctionObservable constant(OutcomeSpace space) {
    return from_function(std::move(space), [](std::size_t) { return 0U; });
  }
  // L = xi_e, the bit carried by the edge with 0-based position `edge`.
  static FunctionObservable pin_edge(OutcomeSpace space, int edge) {
    if (!space.is_pin() || edge < 0 || edge >= space.pin_edge_count())
      throw std::invalid_argument("edge index out of range");
    return from_function(std::move(space), [edge](std::size_t k) { return static_cast<std::uint32_t>((k >> edge) & 1U); });
  }

  const OutcomeSpace& space() const { return space_; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  std::uint64_t label_count() const { return label_count_; }

  // H(X_A, L); A may be empty, giving H(L).
  double joint_entropy(Subset a) const {
    if (!a.within(space_.m())) throw std::out_of_range("subset not within [1, m]");
    const auto range = a.empty() ? std::uint64_t{1} : space_.key_range(a);
    if (range > (std::uint64_t{1} << 62) / label_count_) throw CapError("joint alphabet of (X_A, L) too large");
    std::unordered_map<std::uint64_t, double> mass;
    mass.reserve(std::min<std::size_t>(space_.size(), 1U << 16));
    for (std::size_t k = 0; k < space_.size(); ++k) {
      const std::uint64_t xa = a.empty() ? 0 : space_.key(a, k);
      mass[xa * label_count_ + labels_[k]] += space_.prob(k);
    }
    std::vector<double> ps;
    ps.reserve(mass.size());
    for (auto& kv : mass) ps.push_back(kv.second);
    std::sort(ps.begin(), ps.end());
    return shannon_entropy(ps);
  }

  // H(X_A) computed from the outcome space.
  double source_entropy(Subset a) const {
    if (a.empty()) return 0.0;
    std::unordered_map<std::uint64_t, double> mass;
    for (std::size_t k = 0; k < space_.size(); ++k) mass[space_.key(a, k)] += space_.prob(k);
    std::vector<double> ps;
    for (auto& kv : mass) ps.push_back(kv.second);
    std::sort(ps.begin(), ps.end());
    return shannon_entropy(ps);
  }

 private:
  OutcomeSpace space_;
  std::vector<std::uint32_t> labels_;
  std::uint64_t label_count_ = 1;
};

struct ObservableStats {
  double label_entropy = 0.0;              // H(L)
  std::vector<double> terminal_information;  // I(X_i; L), i = 1..m

  double total_information() const {
    double s = 0.0;
    for (double v : terminal_information) s += v;
    return s;
  }
};

inline ObservableStats observable_stats(const FunctionObservable& obs) {
  ObservableStats out;
  out.label_entropy = obs.joint_entropy({});
  for (int i = 1; i <= obs.space().m(); ++i) {
    const auto xi = Subset::single(i);
    const double v = obs.source_entropy(xi) + out.label_entropy - obs.joint_entropy(xi);
    out.terminal_information.push_back(v < 0.0 ? 0.0 : v);
  }
  return out;
}

}  // namespace skcc
