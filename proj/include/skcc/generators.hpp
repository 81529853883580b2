#pragma once

// Named instance families and the "name:key=value,..." spec syntax used by
// the CLI.

#include "skcc/allocation.hpp"
#include "skcc/hypergraph.hpp"
#include "skcc/model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace skcc {

// K_{m,t}: every t-subset of {1..m}, in lexicographic order.
inline Hypergraph complete_uniform(int m, int t) {
  if (t < 1 || t > m) throw std::invalid_argument("complete-uniform needs 1 <= t <= m");
  if (t == 1) {
    std::vector<Hypergraph::Edge> edges;
    for (int i = 1; i <= m; ++i) edges.push_back({i});
    return Hypergraph(m, std::move(edges));
  }
  const EdgeOrder order(m, t);
  std::vector<Hypergraph::Edge> edges;
  for (int j = 1; j <= order.size(); ++j) edges.push_back(order.edge(j));
  return Hypergraph(m, std::move(edges));
}

inline Hypergraph path_graph(int m) {
  if (m < 2) throw std::invalid_argument("path needs m >= 2");
  std::vector<Hypergraph::Edge> edges;
  for (int i = 1; i < m; ++i) edges.push_back({i, i + 1});
  return Hypergraph(m, std::move(edges));
}

inline Hypergraph cycle_graph(int m) {
  if (m < 3) throw std::invalid_argument("cycle needs m >= 3");
  auto edges = path_graph(m).edges();
  edges.push_back({1, m});
  return Hypergraph(m, std::move(edges));
}

// Pairs {v, v+step} inside consecutive blocks of 2*step vertices; step = 1
// gives (12),(34),...; step = 2 on m = 4 gives (13),(24).
inline Hypergraph matching_graph(int m, int step = 1) {
  if (step < 1 || m % (2 * step) != 0) throw std::invalid_argument("matching needs m divisible by 2*step");
  std::vector<Hypergraph::Edge> edges;
  for (int base = 0; base < m; base += 2 * step)
    for (int v = 1; v <= step; ++v) edges.push_back({base + v, base + v + step});
  return Hypergraph(m, std::move(edges));
}

// Harary graph H_{k,m}: the k-connected graph on m vertices with
// ceil(k m / 2) edges.
inline Hypergraph harary_graph(int m, int k) {
  if (k < 2 || k > m - 1) throw std::invalid_argument("harary needs 2 <= k <= m-1");
  std::set<std::pair<int, int>> pairs;
  auto add = [&](int a, int b) {
    a = a % m;
    b = b % m;
    if (a == b) return;
    pairs.insert({std::min(a, b) + 1, std::max(a, b) + 1});
  };
  for (int v = 0; v < m; ++v)
    for (int d = 1; d <= k / 2; ++d) add(v, v + d);
  if (k % 2 == 1) {
    if (m % 2 == 0) {
      for (int v = 0; v < m / 2; ++v) add(v, v + m / 2);
    } else {
      for (int v = 0; v <= (m - 1) / 2; ++v) add(v, v + (m + 1) / 2);
    }
  }
  std::vector<Hypergraph::Edge> edges;
  for (auto [a, b] : pairs) edges.push_back({a, b});
  return Hypergraph(m, std::move(edges));
}

using Instance = std::variant<Hypergraph, TabularSource>;

struct GeneratorSpec {
  std::string name;
  std::map<std::string, std::string> params;
};

inline GeneratorSpec parse_generator_spec(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (colon == std::string::npos) return spec;
  std::size_t pos = colon + 1;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("generator parameter '" + item + "' is not key=value");
    spec.params[item.substr(0, eq)] = item.substr(eq + 1);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

namespace detail {

inline int int_param(const GeneratorSpec& spec, const std::string& key, std::optional<int> fallback = std::nullopt) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    if (fallback) return *fallback;
    throw std::invalid_argument("generator '" + spec.name + "' needs parameter " + key);
  }
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size())
    throw std::invalid_argument("parameter " + key + " must be an integer, got '" + it->second + "'");
  return v;
}

}  // namespace detail

// complete-uniform:m=,t=   example1:m=,p=   harary:m=,k=   cycle:m=
// path:m=   disconnected:m=   matching:m=,step=
inline Instance generate(const GeneratorSpec& spec) {
  using detail::int_param;
  auto check_known = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : spec.params) {
      bool ok = false;
      for (auto key : keys) ok = ok || k == key;
      if (!ok) throw std::invalid_argument("generator '" + spec.name + "' has no parameter " + k);
    }
  };
  if (spec.name == "complete-uniform") {
    check_known({"m", "t"});
    return complete_uniform(int_param(spec, "m"), int_param(spec, "t"));
  }
  if (spec.name == "example1") {
    check_known({"m", "p"});
    auto it = spec.params.find("p");
    if (it == spec.params.end()) throw std::invalid_argument("generator 'example1' needs parameter p");
    const double p = parse_rational(it->second).convert_to<double>();
    return example1_source(int_param(spec, "m"), p);
  }
  if (spec.name == "harary") {
    check_known({"m", "k"});
    return harary_graph(int_param(spec, "m"), int_param(spec, "k"));
  }
  if (spec.name == "cycle") {
    check_known({"m"});
    return cycle_graph(int_param(spec, "m"));
  }
  if (spec.name == "path") {
    check_known({"m"});
    return path_graph(int_param(spec, "m"));
  }
  if (spec.name == "disconnected") {
    check_known({"m"});
    return matching_graph(int_param(spec, "m"), 1);
  }
  if (spec.name == "matching") {
    check_known({"m", "step"});
    return matching_graph(int_param(spec, "m"), int_param(spec, "step", 1));
  }
  throw std::invalid_argument("unknown generator '" + spec.name +
                              "' (known: complete-uniform, example1, harary, cycle, path, disconnected, matching)");
}

inline Instance generate(const std::string& text) { return generate(parse_generator_spec(text)); }

}  // namespace skcc
