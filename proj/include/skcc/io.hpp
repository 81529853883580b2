#pragma once

// JSON serialization of reports, and the text rendering derived from it.
// Rationals serialize as "num/den" strings, reals as JSON numbers,
// partitions as arrays of arrays of 1-based terminals, lambda vectors as
// sparse objects keyed by "1,2".

#include "skcc/allocation.hpp"
#include "skcc/capacity.hpp"
#include "skcc/partitions.hpp"
#include "skcc/scalar.hpp"
#include "skcc/typecheck.hpp"

#include <json.hpp>

#include <regex>
#include <sstream>
#include <string>

namespace skcc {

using Json = nlohmann::ordered_json;

inline Json scalar_json(const Rational& x) { return to_fraction_string(x); }
inline Json scalar_json(double x) { return x; }

inline Json subset_json(Subset s) {
  Json out = Json::array();
  for (int v : s.members()) out.push_back(v);
  return out;
}

inline Json partition_json(const Partition& p) {
  Json out = Json::array();
  for (const auto& cell : p.cells()) out.push_back(subset_json(cell));
  return out;
}

template <typename Scalar>
Json lambda_json(const LambdaVector<Scalar>& lambda) {
  Json out = Json::object();
  for (const auto& [b, w] : lambda.weights()) out[b.to_string()] = scalar_json(w);
  return out;
}

template <typename Scalar>
Json capacity_json(const CapacityReport<Scalar>& r) {
  Json out;
  out["joint_entropy"] = scalar_json(r.joint_entropy);
  out["i_capacity"] = scalar_json(r.i_capacity);
  out["r_co"] = scalar_json(r.r_co);
  Json mins = Json::array();
  for (const auto& p : r.minimizers) mins.push_back(partition_json(p));
  out["minimizers"] = std::move(mins);
  out["minimizer_count"] = r.minimizer_count;
  out["truncated"] = r.truncated();
  out["lp_value"] = r.lp_value ? scalar_json(*r.lp_value) : Json();
  out["lambda"] = r.lambda_star_witness ? lambda_json(*r.lambda_star_witness) : Json();
  return out;
}

template <typename Scalar>
Json lp_json(const LpCapacity<Scalar>& lp, const LambdaVerdict<Scalar>& tilde) {
  Json out;
  out["lp_value"] = scalar_json(lp.value);
  out["lambda"] = lambda_json(lp.witness);
  Json t;
  t["feasible"] = tilde.feasible;
  t["objective"] = scalar_json(tilde.objective);
  t["optimal"] = tilde.optimal;
  out["lambda_tilde"] = std::move(t);
  return out;
}

template <typename Scalar>
Json typecheck_json(const TypeSVerdict<Scalar>& v) {
  Json out;
  out["is_minimizer"] = v.is_minimizer;
  out["is_unique"] = v.is_unique;
  out["worst_b"] = v.worst_b ? subset_json(*v.worst_b) : Json();
  out["delta_s"] = scalar_json(v.delta_s);
  out["min_gap"] = scalar_json(v.min_gap);
  return out;
}

inline Json rsk_json(const RskResult& r) {
  Json out;
  out["r_sk"] = scalar_json(r.r_sk);
  out["r_co"] = scalar_json(r.r_co);
  out["m"] = r.m;
  out["t"] = r.t;
  out["edge_count"] = r.edge_count;
  out["cross_checked"] = r.cross_checked;
  return out;
}

template <typename Scalar>
Json club_json(const ClubRelation<Scalar>& c) {
  Json out;
  out["i_x"] = scalar_json(c.i_x);
  out["i_y"] = scalar_json(c.i_y);
  out["i_z"] = scalar_json(c.i_z);
  out["superadditive"] = c.superadditive;
  out["equality"] = c.equality;
  out["shared_minimizer"] = c.shared_minimizer;
  Json shared = Json::array();
  for (const auto& p : c.shared) shared.push_back(partition_json(p));
  out["shared_minimizers"] = std::move(shared);
  return out;
}

inline Json lemma2_json(const Lemma2Report& r) {
  Json out;
  out["t"] = r.t;
  out["trials"] = r.trials;
  out["counted"] = r.counted;
  out["max_ratio"] = r.max_ratio;
  out["violations"] = r.violations;
  if (!r.structured.empty()) {
    Json cases = Json::array();
    for (const auto& c : r.structured) {
      Json j;
      j["name"] = c.name;
      j["label_entropy"] = c.label_entropy;
      j["total_information"] = c.total_information;
      j["bound"] = c.bound;
      j["violation"] = c.violation;
      cases.push_back(std::move(j));
    }
    out["structured"] = std::move(cases);
  }
  return out;
}

inline Json allocation_json(const AllocationState& s, bool trace) {
  const EdgeOrder order(s.m, s.t);
  const auto claims = verify_claims(s);
  Json out;
  out["m"] = s.m;
  out["t"] = s.t;
  out["status"] = to_string(s.status);
  Json allocs = Json::array();
  for (const auto& a : s.allocations) allocs.push_back(render_allocation(order, a));
  out["allocations"] = std::move(allocs);
  if (s.failed) out["failed"] = "no row available for " + order.label(s.failed->edge) + " -> R(" + std::to_string(s.failed->target) + ")";
  out["claim1_ok"] = claims.claim1_ok;
  out["claim2_ok"] = claims.claim2_ok;
  if (trace) {
    out["initial_table"] = render_table(s.initial);
    Json snaps = Json::array();
    for (const auto& t : s.snapshots) snaps.push_back(render_table(t));
    out["tables"] = std::move(snaps);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text rendering. Every text report is produced from the JSON value, so the
// two output modes cannot disagree.

namespace detail {

inline bool is_fraction(const std::string& s) {
  static const std::regex re("-?[0-9]+/[0-9]+");
  return std::regex_match(s, re);
}

inline bool is_int_array(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (!x.is_number_integer()) return false;
  return true;
}

inline bool is_partition(const Json& v) {
  if (!v.is_array() || v.empty()) return false;
  for (const auto& cell : v)
    if (!is_int_array(cell) || cell.empty()) return false;
  return true;
}

inline std::string render_set(const Json& cell) {
  std::string out = "{";
  for (std::size_t k = 0; k < cell.size(); ++k) out += (k ? "," : "") + std::to_string(cell[k].get<long long>());
  return out + "}";
}

inline std::string render_partition(const Json& p) {
  std::string out = "{";
  for (std::size_t k = 0; k < p.size(); ++k) out += (k ? "," : "") + render_set(p[k]);
  return out + "}";
}

inline std::string render_atom(const Json& v) {
  if (v.is_null()) return "none";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number_float()) return render_real(v.get<double>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    return is_fraction(s) ? render_rational(parse_rational(s)) : s;
  }
  if (is_int_array(v)) return render_set(v);
  if (is_partition(v)) return render_partition(v);
  return v.dump();
}

inline bool is_atom(const Json& v) {
  if (v.is_object()) return false;
  if (!v.is_array()) return true;
  if (v.empty()) return false;
  return is_int_array(v) || is_partition(v);
}

inline void render_field(std::ostream& os, const std::string& key, const Json& v, const std::string& indent) {
  if (is_atom(v)) {
    const auto text = render_atom(v);
    if (text.find('\n') == std::string::npos) {
      os << indent << key << " = " << text << '\n';
    } else {
      os << indent << key << ":\n" << text;
      if (text.back() != '\n') os << '\n';
    }
    return;
  }
  if (v.empty()) {
    os << indent << key << (v.is_object() ? " = {}\n" : " = []\n");
    return;
  }
  os << indent << key << ":\n";
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) render_field(os, k, x, indent + "  ");
    return;
  }
  for (const auto& x : v) {
    if (is_atom(x)) {
      const auto text = render_atom(x);
      if (text.find('\n') == std::string::npos) {
        os << indent << "  " << text << '\n';
      } else {
        os << text;
        if (text.back() != '\n') os << '\n';
      }
    } else {
      os << indent << "  -\n";
      for (const auto& [k, y] : x.items()) render_field(os, k, y, indent + "    ");
    }
  }
}

}  // namespace detail

// "key = value" lines; rationals as "1.500000 (= 3/2)" or "5 (= 5/1)".
inline std::string render_text(const Json& report) {
  std::ostringstream os;
  if (!report.is_object()) return detail::render_atom(report) + "\n";
  for (const auto& [k, v] : report.items()) detail::render_field(os, k, v, "");
  return os.str();
}

}  // namespace skcc
