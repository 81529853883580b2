#pragma once

// Allocation of the chain-rule terms Q_e to the targets R(i) on the complete
// t-uniform hypergraph K_{m,t}, executed step by step with its availability
// table, plus the checks that it never errors and consumes every Q_e term.

#include "skcc/errors.hpp"
#include "skcc/scalar.hpp"
#include "skcc/subset.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace skcc {

inline constexpr int kMaxAllocationTerminals = 16;

// The C(m, t) sorted t-tuples of {1..m} in lexicographic order, indexed 1..C(m, t).
class EdgeOrder {
 public:
  using Edge = std::vector<int>;

  EdgeOrder(int m, int t) : m_(m), t_(t) {
    if (t < 2 || t > m) throw std::invalid_argument("edge order needs 2 <= t <= m");
    if (m > 20) throw CapError("edge order is capped at m <= 20");
    Edge cur(t);
    for (int k = 0; k < t; ++k) cur[k] = k + 1;
    for (;;) {
      edges_.push_back(cur);
      int k = t - 1;
      while (k >= 0 && cur[k] == m - t + k + 1) --k;
      if (k < 0) break;
      ++cur[k];
      for (int l = k + 1; l < t; ++l) cur[l] = cur[l - 1] + 1;
    }
    for (const auto& e : edges_) masks_.push_back(Subset::from_members(e));
  }

  int m() const { return m_; }
  int t() const { return t_; }
  int size() const { return static_cast<int>(edges_.size()); }

  // 1-based.
  const Edge& edge(int j) const { return edges_.at(j - 1); }
  Subset mask(int j) const { return masks_.at(j - 1); }

  // Lexicographic rank of a sorted t-tuple, 1-based.
  int index_of(const Edge& e) const {
    if (static_cast<int>(e.size()) != t_) throw std::invalid_argument("edge has the wrong size");
    long long rank = 0;
    int prev = 0;
    for (int k = 0; k < t_; ++k) {
      if (e[k] <= prev || e[k] > m_) throw std::invalid_argument("edge is not a sorted t-subset of [1, m]");
      for (int v = prev + 1; v < e[k]; ++v) rank += binomial(m_ - v, t_ - k - 1).convert_to<long long>();
      prev = e[k];
    }
    return static_cast<int>(rank) + 1;
  }

  std::string label(int j) const {
    std::string out = "(";
    const auto& e = edge(j);
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (k && m_ > 9) out += ',';
      out += std::to_string(e[k]);
    }
    return out + ")";
  }

 private:
  int m_;
  int t_;
  std::vector<Edge> edges_;
  std::vector<Subset> masks_;
};

struct QRow {
  int i = 0;
  std::vector<int> at_least;    // E_{>=i}: edges at i with no terminal below i
  std::vector<int> not_above;   // E_{not> i}: edges at i with some terminal below i
};

struct RRow {
  int i = 0;
  std::vector<int> edges;  // E_i
};

struct TermDecomposition {
  int m = 0;
  int t = 0;
  std::vector<QRow> q_rows;  // i = 2 .. m-t+1
  std::vector<RRow> r_rows;  // i = m-t+2 .. m

  long long q_term_count() const {
    long long n = 0;
    for (const auto& r : q_rows) n += static_cast<long long>(r.not_above.size());
    return n;
  }
};

inline TermDecomposition term_decomposition(const EdgeOrder& order) {
  const int m = order.m();
  const int t = order.t();
  TermDecomposition out;
  out.m = m;
  out.t = t;
  for (int i = 2; i <= m - t + 1; ++i) {
    QRow row;
    row.i = i;
    const Subset below = Subset::full(i - 1);
    for (int j = 1; j <= order.size(); ++j) {
      const auto e = order.mask(j);
      if (!e.contains(i)) continue;
      (e.intersects(below) ? row.not_above : row.at_least).push_back(j);
    }
    out.q_rows.push_back(std::move(row));
  }
  for (int i = std::max(2, m - t + 2); i <= m; ++i) {
    RRow row;
    row.i = i;
    for (int j = 1; j <= order.size(); ++j)
      if (order.mask(j).contains(i)) row.edges.push_back(j);
    out.r_rows.push_back(std::move(row));
  }
  return out;
}

inline TermDecomposition term_decomposition(int m, int t) { return term_decomposition(EdgeOrder(m, t)); }

struct Allocation {
  int edge = 0;    // column j
  int source = 0;  // row k: the term came from Q(k)
  int target = 0;  // R(i)
};

enum class AllocationStatus { running, done, error };

inline const char* to_string(AllocationStatus s) {
  switch (s) {
    case AllocationStatus::running: return "running";
    case AllocationStatus::done: return "done";
    case AllocationStatus::error: return "error";
  }
  return "?";
}

// Availability table T: rows k = 2 .. m-t+1, columns j = 1 .. C(m, t).
class AvailabilityTable {
 public:
  AvailabilityTable() = default;
  AvailabilityTable(int first_row, int rows, int cols)
      : first_row_(first_row), rows_(rows), cols_(cols), cells_(static_cast<std::size_t>(rows) * cols, 0) {}

  int first_row() const { return first_row_; }
  int last_row() const { return first_row_ + rows_ - 1; }
  int columns() const { return cols_; }

  std::uint8_t get(int k, int j) const { return cells_[index(k, j)]; }
  void set(int k, int j, std::uint8_t v) { cells_[index(k, j)] = v; }

  int ones() const {
    int n = 0;
    for (auto c : cells_) n += c;
    return n;
  }
  std::vector<std::uint8_t> row(int k) const {
    return {cells_.begin() + index(k, 1), cells_.begin() + index(k, 1) + cols_};
  }

  bool operator==(const AvailabilityTable&) const = default;

 private:
  std::size_t index(int k, int j) const {
    if (k < first_row_ || k > last_row() || j < 1 || j > cols_) throw std::out_of_range("table index out of range");
    return static_cast<std::size_t>(k - first_row_) * cols_ + (j - 1);
  }

  int first_row_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

struct AllocationState {
  int m = 0;
  int t = 0;
  AvailabilityTable initial;
  AvailabilityTable table;
  std::vector<Allocation> allocations;
  AllocationStatus status = AllocationStatus::running;
  std::optional<Allocation> failed;  // (edge, -, target) that found no available row
  // With tracing: the table after each consumption; snapshots[k] follows allocations[k].
  std::vector<AvailabilityTable> snapshots;
};

inline void check_allocation_range(int m, int t) {
  if (t < 2 || t > m - 1) throw std::invalid_argument("allocation needs 2 <= t <= m-1");
  if (m > kMaxAllocationTerminals)
    throw CapError("allocation is capped at m <= " + std::to_string(kMaxAllocationTerminals));
}

// Runs the allocation loop literally: for each target i = m-t+2..m and each
// column j ascending with i not in e_j, take the term from the smallest row
// k with T(k, j) = 1 and clear that entry; if no row is available, ERROR.
inline AllocationState run_allocation(int m, int t, bool trace = false) {
  check_allocation_range(m, t);
  const EdgeOrder order(m, t);
  const int n = order.size();
  const int last_row = m - t + 1;

  AllocationState s;
  s.m = m;
  s.t = t;
  s.table = AvailabilityTable(2, last_row - 1, n);
  for (const auto& row : term_decomposition(order).q_rows)
    for (int j : row.not_above) s.table.set(row.i, j, 1);
  s.initial = s.table;

  int i = m - t + 2;
  int j = 1;
  while (i <= m && j <= n) {
    if (!order.mask(j).contains(i)) {
      int k = 2;
      while (k <= last_row) {
        if (s.table.get(k, j) == 1) {
          s.allocations.push_back(Allocation{j, k, i});
          s.table.set(k, j, 0);
          if (trace) s.snapshots.push_back(s.table);
          break;
        }
        if (s.table.get(k, j) == 0 && k == last_row) {
          s.status = AllocationStatus::error;
          s.failed = Allocation{j, 0, i};
          return s;
        }
        ++k;
      }
    }
    ++j;
    if (j == n + 1) {
      ++i;
      j = 1;
    }
  }
  s.status = AllocationStatus::done;
  return s;
}

struct ClaimVerdict {
  bool claim1_ok = false;  // never terminated in ERROR
  bool claim2_ok = false;  // every Q_e term consumed; each R(i) got exactly the edges avoiding i
};

inline ClaimVerdict verify_claims(const AllocationState& s) {
  ClaimVerdict v;
  v.claim1_ok = s.status != AllocationStatus::error;
  if (!v.claim1_ok) return v;
  const EdgeOrder order(s.m, s.t);
  const long long expected_total =
      static_cast<long long>(s.t - 1) * binomial(s.m - 1, s.t).convert_to<long long>();
  bool ok = s.table.ones() == 0 && s.initial.ones() == expected_total &&
            static_cast<long long>(s.allocations.size()) == expected_total;
  for (int i = s.m - s.t + 2; ok && i <= s.m; ++i) {
    std::vector<int> got;
    for (const auto& a : s.allocations)
      if (a.target == i) got.push_back(a.edge);
    std::vector<int> want;
    for (int j = 1; j <= order.size(); ++j)
      if (!order.mask(j).contains(i)) want.push_back(j);
    std::sort(got.begin(), got.end());
    ok = got == want;
  }
  // every allocation consumed an entry that was initially available
  for (const auto& a : s.allocations)
    if (ok && s.initial.get(a.source, a.edge) != 1) ok = false;
  v.claim2_ok = ok;
  return v;
}

inline std::string render_allocation(const EdgeOrder& order, const Allocation& a) {
  return "Q_" + order.label(a.edge) + " from Q(" + std::to_string(a.source) + ") -> R(" + std::to_string(a.target) + ")";
}

// Row/column layout of the availability table: a header of column indices,
// then one line per row k.
inline std::string render_table(const AvailabilityTable& table) {
  std::ostringstream os;
  const int width = static_cast<int>(std::to_string(table.columns()).size());
  auto cell = [&](const std::string& s) {
    os << ' ' << std::string(width - std::min<int>(width, static_cast<int>(s.size())), ' ') << s;
  };
  os << std::string(std::to_string(table.last_row()).size(), ' ') << " |";
  for (int j = 1; j <= table.columns(); ++j) cell(std::to_string(j));
  os << '\n';
  for (int k = table.first_row(); k <= table.last_row(); ++k) {
    auto label = std::to_string(k);
    os << std::string(std::to_string(table.last_row()).size() - label.size(), ' ') << label << " |";
    for (int j = 1; j <= table.columns(); ++j) cell(std::to_string(table.get(k, j)));
    os << '\n';
  }
  return os.str();
}

}  // namespace skcc
