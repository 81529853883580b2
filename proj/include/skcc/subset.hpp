#pragma once

// Subsets of the terminal set {1..m}, stored as bit masks (bit i-1 <-> i).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace skcc {

inline constexpr int kMaxTerminals = 63;

class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}
  Subset(std::initializer_list<int> members) {
    for (int v : members) insert(v);
  }

  static Subset from_members(const std::vector<int>& members) {
    Subset s;
    for (int v : members) s.insert(v);
    return s;
  }
  static constexpr Subset full(int m) {
    return Subset(m >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << m) - 1));
  }
  static constexpr Subset single(int v) { return Subset(std::uint64_t{1} << (v - 1)); }

  void insert(int v) {
    if (v < 1 || v > kMaxTerminals) throw std::out_of_range("terminal index out of range: " + std::to_string(v));
    bits_ |= std::uint64_t{1} << (v - 1);
  }

  constexpr bool contains(int v) const { return (bits_ >> (v - 1)) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr std::uint64_t bits() const { return bits_; }
  // Largest terminal index present (0 when empty).
  constexpr int max_element() const { return 64 - std::countl_zero(bits_); }
  constexpr int min_element() const { return empty() ? 0 : std::countr_zero(bits_) + 1; }
  constexpr bool within(int m) const { return (bits_ & ~full(m).bits()) == 0; }
  constexpr bool is_subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(Subset other) const { return (bits_ & other.bits_) != 0; }

  constexpr Subset operator|(Subset o) const { return Subset(bits_ | o.bits_); }
  constexpr Subset operator&(Subset o) const { return Subset(bits_ & o.bits_); }
  constexpr Subset minus(Subset o) const { return Subset(bits_ & ~o.bits_); }
  constexpr Subset complement(int m) const { return Subset(full(m).bits() & ~bits_); }

  constexpr bool operator==(const Subset&) const = default;

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  // "1,2,4"; the empty set renders as "".
  std::string to_string() const {
    std::string out;
    for (int v : members()) {
      if (!out.empty()) out += ',';
      out += std::to_string(v);
    }
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

// Lexicographic order on the sorted member tuples: {1} < {1,2} < {1,3} < {2}.
inline bool lex_less(Subset a, Subset b) {
  auto x = a.members();
  auto y = b.members();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

inline Subset parse_subset(const std::string& text) {
  Subset s;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    auto piece = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    int v = std::stoi(piece, &used);
    if (used != piece.size()) throw std::invalid_argument("bad subset '" + text + "'");
    s.insert(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return s;
}

}  // namespace skcc
