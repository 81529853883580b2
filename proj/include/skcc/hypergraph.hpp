#pragma once

#include "skcc/errors.hpp"
#include "skcc/subset.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace skcc {

// A multi-hypergraph on vertices 1..m. Edges are kept in lexicographic
// order of their sorted vertex tuples; parallel copies are kept as
// separate edges.
class Hypergraph {
 public:
  using Edge = std::vector<int>;

  Hypergraph(int m, std::vector<Edge> edges) : m_(m), edges_(std::move(edges)) {
    if (m_ < 1) throw std::invalid_argument("hypergraph needs m >= 1");
    if (m_ > kMaxTerminals) throw CapError("m = " + std::to_string(m_) + " exceeds the cap of " + std::to_string(kMaxTerminals));
    for (const auto& e : edges_) validate_edge(e, 0);
    std::stable_sort(edges_.begin(), edges_.end());
    masks_.reserve(edges_.size());
    for (const auto& e : edges_) masks_.push_back(Subset::from_members(e));
  }

  int m() const { return m_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Subset>& edge_masks() const { return masks_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  // Common edge size, if every edge has the same size.
  std::optional<int> uniform_size() const {
    if (edges_.empty()) return std::nullopt;
    const auto t = edges_.front().size();
    for (const auto& e : edges_)
      if (e.size() != t) return std::nullopt;
    return static_cast<int>(t);
  }

  // Number of edges meeting `a`.
  long long incident_count(Subset a) const {
    long long n = 0;
    for (auto mask : masks_) n += mask.intersects(a);
    return n;
  }

  std::string to_text(std::string_view comment = {}) const {
    std::ostringstream os;
    if (!comment.empty()) os << "# " << comment << '\n';
    os << m_ << '\n';
    for (const auto& e : edges_) {
      for (std::size_t k = 0; k < e.size(); ++k) os << (k ? " " : "") << e[k];
      os << '\n';
    }
    return os.str();
  }

  bool operator==(const Hypergraph& o) const { return m_ == o.m_ && edges_ == o.edges_; }

 private:
  void validate_edge(const Edge& e, int line) const {
    if (e.empty()) throw ParseError(line, "empty hyperedge");
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] < 1 || e[k] > m_)
        throw ParseError(line, "vertex " + std::to_string(e[k]) + " out of range [1, " + std::to_string(m_) + "]");
      if (k > 0 && e[k] == e[k - 1]) throw ParseError(line, "repeated vertex " + std::to_string(e[k]) + " in hyperedge");
      if (k > 0 && e[k] < e[k - 1]) throw ParseError(line, "hyperedge vertices must be strictly increasing");
    }
  }

  int m_;
  std::vector<Edge> edges_;
  std::vector<Subset> masks_;
};

namespace detail {

inline std::string_view strip_comment(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && !(line[j] == ' ' || line[j] == '\t' || line[j] == '\r')) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline long long parse_int(std::string_view token, int line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  return v;
}

}  // namespace detail

// Parses the hypergraph text format: '#' comments, then m on its own line,
// then one hyperedge per line as strictly increasing 1-based vertices.
inline Hypergraph load_hypergraph(std::string_view text) {
  int m = 0;
  bool have_m = false;
  std::vector<Hypergraph::Edge> edges;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto tokens = detail::split_ws(detail::strip_comment(raw));
    if (tokens.empty()) continue;
    if (!have_m) {
      if (tokens.size() != 1) throw ParseError(line_no, "first line must hold only the vertex count m");
      auto v = detail::parse_int(tokens[0], line_no);
      if (v < 1) throw ParseError(line_no, "vertex count m must be >= 1");
      if (v > kMaxTerminals) throw ParseError(line_no, "vertex count m exceeds the cap of " + std::to_string(kMaxTerminals));
      m = static_cast<int>(v);
      have_m = true;
      continue;
    }
    Hypergraph::Edge e;
    for (auto tok : tokens) {
      auto v = detail::parse_int(tok, line_no);
      if (v < 1 || v > m)
        throw ParseError(line_no, "vertex " + std::to_string(v) + " out of range [1, " + std::to_string(m) + "]");
      if (std::find(e.begin(), e.end(), static_cast<int>(v)) != e.end())
        throw ParseError(line_no, "repeated vertex " + std::to_string(v) + " in hyperedge");
      if (!e.empty() && v < e.back()) throw ParseError(line_no, "hyperedge vertices must be strictly increasing");
      e.push_back(static_cast<int>(v));
    }
    edges.push_back(std::move(e));
  }
  if (!have_m) throw ParseError(0, "missing vertex count m");
  if (edges.empty()) throw ParseError(0, "hypergraph has no hyperedges");
  return Hypergraph(m, std::move(edges));
}

}  // namespace skcc
