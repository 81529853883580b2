#pragma once

// Set partitions of {1..m}, the normalized partition surplus Delta(P), and
// the special partitions S (all singletons) and P_B.

#include "skcc/errors.hpp"
#include "skcc/model.hpp"
#include "skcc/scalar.hpp"
#include "skcc/subset.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace skcc {

// Full enumeration cap (Bell(12) = 4213597).
inline constexpr int kMaxEnumerationTerminals = 12;

// Cells are disjoint, nonempty and cover {1..m}; they are kept ordered by
// smallest element, which makes the representation canonical.
class Partition {
 public:
  Partition(int m, std::vector<Subset> cells) : m_(m), cells_(std::move(cells)) {
    if (m_ < 1) throw std::invalid_argument("partition needs m >= 1");
    Subset seen;
    for (auto c : cells_) {
      if (c.empty()) throw std::invalid_argument("partition cell is empty");
      if (!c.within(m_)) throw std::invalid_argument("partition cell {" + c.to_string() + "} outside [1, m]");
      if (c.intersects(seen)) throw std::invalid_argument("partition cells overlap");
      seen = seen | c;
    }
    if (seen != Subset::full(m_)) throw std::invalid_argument("partition cells do not cover [1, m]");
    std::sort(cells_.begin(), cells_.end(), [](Subset a, Subset b) { return a.min_element() < b.min_element(); });
  }

  int m() const { return m_; }
  int size() const { return static_cast<int>(cells_.size()); }
  const std::vector<Subset>& cells() const { return cells_; }

  bool operator==(const Partition& o) const { return m_ == o.m_ && cells_ == o.cells_; }

  // Restricted growth string: rgs[i-1] = index of the cell holding i.
  std::vector<int> rgs() const {
    std::vector<int> out(m_);
    for (int c = 0; c < size(); ++c)
      for (int v : cells_[c].members()) out[v - 1] = c;
    return out;
  }

  // "{{1},{2,3}}"
  std::string to_string() const {
    std::string out = "{";
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      out += c ? ",{" : "{";
      out += cells_[c].to_string();
      out += '}';
    }
    return out + "}";
  }

 private:
  int m_;
  std::vector<Subset> cells_;
};

// Orders partitions by their restricted growth strings, the enumeration order.
inline bool rgs_less(const Partition& a, const Partition& b) {
  auto x = a.rgs();
  auto y = b.rgs();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

inline Partition singleton_partition(int m) {
  std::vector<Subset> cells;
  for (int i = 1; i <= m; ++i) cells.push_back(Subset::single(i));
  return Partition(m, std::move(cells));
}

// P_B = {{b_1}, ..., {b_|B|}, B^c}.
inline Partition partition_from_subset(Subset b, int m) {
  if (b.empty()) throw std::invalid_argument("P_B needs a nonempty B");
  if (!b.within(m)) throw std::invalid_argument("B not within [1, m]");
  if (b == Subset::full(m)) throw std::invalid_argument("P_B needs B to be a proper subset");
  std::vector<Subset> cells;
  for (int v : b.members()) cells.push_back(Subset::single(v));
  cells.push_back(b.complement(m));
  return Partition(m, std::move(cells));
}

inline void check_enumeration_cap(int m, bool allow_large) {
  if (m < 1) throw std::invalid_argument("partition enumeration needs m >= 1");
  if (m > kMaxEnumerationTerminals && !allow_large)
    throw CapError("partition enumeration is capped at m <= " + std::to_string(kMaxEnumerationTerminals) + " (got m = " +
                   std::to_string(m) + ")");
  if (m > 20) throw CapError("partition enumeration is impossible beyond m = 20");
}

namespace detail {

// Depth-first walk over restricted growth strings in lexicographic order.
// The callback receives the cell masks of each complete partition.
class RgsWalker {
 public:
  using Visit = std::function<void(std::span<const Subset>)>;

  RgsWalker(int m, int min_cells, const Visit& visit) : m_(m), min_cells_(min_cells), visit_(visit) {}

  // Walks every completion of the given prefix (itself a valid RGS).
  void walk_from(std::span<const int> prefix) {
    blocks_ = 0;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      const int b = prefix[k];
      if (b == blocks_) cells_[blocks_++] = Subset();
      cells_[b] = cells_[b] | Subset::single(static_cast<int>(k) + 1);
    }
    descend(static_cast<int>(prefix.size()));
  }

 private:
  void descend(int pos) {
    if (blocks_ + (m_ - pos) < min_cells_) return;
    if (pos == m_) {
      visit_(std::span<const Subset>(cells_.data(), blocks_));
      return;
    }
    const auto bit = Subset::single(pos + 1);
    for (int b = 0; b < blocks_; ++b) {
      const auto saved = cells_[b];
      cells_[b] = saved | bit;
      descend(pos + 1);
      cells_[b] = saved;
    }
    cells_[blocks_++] = bit;
    descend(pos + 1);
    --blocks_;
  }

  int m_;
  int min_cells_;
  const Visit& visit_;
  std::array<Subset, 64> cells_{};
  int blocks_ = 0;
};

// All restricted growth strings of length n, in lexicographic order.
inline std::vector<std::vector<int>> rgs_prefixes(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int pos, int blocks) {
    if (pos == n) {
      out.push_back(cur);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      cur.push_back(b);
      rec(pos + 1, std::max(blocks, b + 1));
      cur.pop_back();
    }
  };
  if (n == 0) return {{}};
  cur.push_back(0);
  rec(1, 1);
  return out;
}

}  // namespace detail

// Calls `visit` with the cells of every partition of {1..m} that has at
// least min_cells cells, in restricted-growth-string order.
inline void for_each_partition(int m, int min_cells, const std::function<void(std::span<const Subset>)>& visit,
                               bool allow_large = false) {
  check_enumeration_cap(m, allow_large);
  if (min_cells < 1 || min_cells > m) throw std::invalid_argument("min_cells must lie in [1, m]");
  detail::RgsWalker walker(m, min_cells, visit);
  const int zero = 0;
  walker.walk_from(std::span<const int>(&zero, 1));
}

inline std::vector<Partition> enumerate_partitions(int m, int min_cells, bool allow_large = false) {
  std::vector<Partition> out;
  for_each_partition(
      m, min_cells,
      [&](std::span<const Subset> cells) { out.emplace_back(m, std::vector<Subset>(cells.begin(), cells.end())); },
      allow_large);
  return out;
}

// Splits the enumeration into shards by fixed RGS prefixes. Prefix p (in
// lexicographic order) belongs to shard p % shard_count; within a prefix the
// walk is lexicographic, so (prefix index, visit index) is a global order key.
struct PartitionShards {
  int m;
  int prefix_length;
  std::vector<std::vector<int>> prefixes;

  explicit PartitionShards(int m_) : m(m_), prefix_length(std::min(m_, 5)), prefixes(detail::rgs_prefixes(prefix_length)) {}

  void walk_prefix(std::size_t index, int min_cells, const std::function<void(std::span<const Subset>)>& visit) const {
    detail::RgsWalker walker(m, min_cells, visit);
    walker.walk_from(prefixes[index]);
  }
};

template <typename Scalar>
Scalar partition_surplus(const EntropyOracle<Scalar>& oracle, const Partition& p) {
  Scalar s = -oracle.joint();
  for (auto c : p.cells()) s += oracle.entropy(c);
  return s;
}

// Delta(P) = (sum over cells of H(X_cell) - H(X_M)) / (|P| - 1).
template <typename Scalar>
Scalar delta(const EntropyOracle<Scalar>& oracle, const Partition& p) {
  if (p.m() != oracle.m()) throw std::invalid_argument("partition and oracle disagree on m");
  if (p.size() < 2) throw std::invalid_argument("Delta needs a partition with at least 2 cells");
  Scalar d = partition_surplus(oracle, p) / Scalar(p.size() - 1);
  if (ScalarTraits<Scalar>::less(d, Scalar(0)))
    throw InternalError("Delta(" + p.to_string() + ") is negative; the oracle is not submodular");
  return d;
}

}  // namespace skcc
