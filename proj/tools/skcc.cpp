// skcc: secret-key capacity, omniscience rate, Type-S and R_SK analyses of
// multiterminal sources from the command line.
//
// Exit codes: 0 success, 2 parse/usage/cap error, 3 precondition not met,
// 4 internal verification failure.

#include "skcc/generators.hpp"
#include "skcc/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using namespace skcc;

constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitInternal = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  bool json = false;
  int threads = 1;
  std::vector<std::string> inputs;
  std::vector<std::string> gens;
  std::string kind;
  bool lp = false;
  bool allow_large = false;
  std::size_t limit_minimizers = kDefaultMinimizerLimit;
  bool trace = false;
  int trials = 1000;
  std::uint64_t seed = 1;
  bool structured = false;
  std::string observable = "identity";
  int m = 0;
  int t = 0;
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Instance from_generator(const std::string& spec) {
  try {
    return generate(spec);
  } catch (const CapError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--gen ") + spec + ": " + e.what());
  }
}

Instance load_instance(const std::string& path, const std::string& kind) {
  std::string k = kind;
  if (k.empty()) {
    if (ends_with(path, ".hg")) k = "pin";
    else if (ends_with(path, ".pmf")) k = "pmf";
    else throw UsageError("cannot infer the kind of '" + path + "' from its extension; pass --kind pin or --kind pmf");
  }
  const auto text = read_file(path);
  try {
    if (k == "pin") return load_hypergraph(text);
    return load_pmf(text);
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

std::vector<Instance> sources(const Options& o, std::size_t want) {
  std::vector<Instance> out;
  for (const auto& path : o.inputs) out.push_back(load_instance(path, o.kind));
  for (const auto& spec : o.gens) out.push_back(from_generator(spec));
  if (out.size() != want)
    throw UsageError("expected " + std::to_string(want) + " source(s) (files or --gen), got " + std::to_string(out.size()));
  return out;
}

Json header(const Instance& src) {
  Json out;
  if (const auto* h = std::get_if<Hypergraph>(&src)) {
    out["source"] = "pin";
    out["m"] = h->m();
    out["edge_count"] = h->edge_count();
  } else {
    out["source"] = "pmf";
    out["m"] = std::get<TabularSource>(src).m();
  }
  return out;
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

// Calls f with the exact oracle for PIN sources and the binary64 oracle for
// tabular ones.
template <typename F>
auto with_oracle(const Instance& src, F&& f) {
  if (const auto* h = std::get_if<Hypergraph>(&src)) return f(PinSource(*h).oracle());
  return f(std::get<TabularSource>(src).oracle());
}

Json cmd_analyze(const Options& o) {
  const auto src = sources(o, 1).front();
  Json out = header(src);
  CapacityOptions opts;
  opts.minimizer_limit = o.limit_minimizers;
  opts.threads = o.threads;
  opts.allow_large = o.allow_large;
  opts.with_lp = o.lp;
  merge(out, with_oracle(src, [&](const auto& oracle) { return capacity_json(sk_capacity(oracle, opts)); }));
  return out;
}

template <typename Scalar>
Json typecheck_small(const EntropyOracle<Scalar>& oracle, int threads) {
  // m = 2: S is the only partition with two or more cells.
  if (oracle.m() < 2) throw PreconditionError("the Type-S test needs m >= 2");
  CapacityOptions opts;
  opts.minimizer_limit = 0;
  opts.threads = threads;
  const auto report = sk_capacity(oracle, opts);
  const auto s = singleton_partition(oracle.m());
  const bool has_s = std::find(report.minimizers.begin(), report.minimizers.end(), s) != report.minimizers.end();
  Json out;
  out["is_minimizer"] = has_s;
  out["is_unique"] = has_s && report.minimizers.size() == 1;
  out["worst_b"] = nullptr;
  out["delta_s"] = scalar_json(delta(oracle, s));
  out["method"] = "minimizer inspection";
  return out;
}

Json cmd_typecheck(const Options& o) {
  const auto src = sources(o, 1).front();
  Json out = header(src);
  merge(out, with_oracle(src, [&](const auto& oracle) {
          if (oracle.m() < 3) return typecheck_small(oracle, o.threads);
          Json j = typecheck_json(is_type_s(oracle));
          j["method"] = "subset sweep";
          return j;
        }));
  return out;
}

Json cmd_rsk(const Options& o) {
  const auto src = sources(o, 1).front();
  const auto* h = std::get_if<Hypergraph>(&src);
  if (!h) throw PreconditionError("R_SK is computed for hypergraph PIN sources only");
  return rsk_json(rsk_uniform_pin(*h, o.threads));
}

Json cmd_lp(const Options& o) {
  const auto src = sources(o, 1).front();
  Json out = header(src);
  merge(out, with_oracle(src, [&](const auto& oracle) {
          using Scalar = std::decay_t<decltype(oracle.joint())>;
          const auto lp = lp_capacity(oracle);
          return lp_json(lp, verify_lambda(oracle, lambda_tilde<Scalar>(oracle.m())));
        }));
  return out;
}

FunctionObservable make_observable(const Instance& src, const Options& o) {
  const auto space = std::holds_alternative<Hypergraph>(src) ? OutcomeSpace::from_pin(std::get<Hypergraph>(src))
                                                              : OutcomeSpace::from_tabular(std::get<TabularSource>(src));
  const auto& name = o.observable;
  auto index_after = [&](const std::string& prefix) {
    const auto text = name.substr(prefix.size());
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size()) throw UsageError("bad observable '" + name + "'");
    return v;
  };
  if (name == "identity") return FunctionObservable::identity(space);
  if (name == "constant") return FunctionObservable::constant(space);
  if (name == "random") return random_observable(space, o.seed, 0);
  if (name.rfind("edge:", 0) == 0) {
    if (!space.is_pin()) throw UsageError("edge:K observables need a PIN source");
    const int e = index_after("edge:");
    if (e < 1 || e > space.pin_edge_count()) throw UsageError("edge index out of range in '" + name + "'");
    return FunctionObservable::pin_edge(space, e - 1);
  }
  if (name.rfind("coord:", 0) == 0) {
    const int i = index_after("coord:");
    if (i < 1 || i > space.m()) throw UsageError("terminal out of range in '" + name + "'");
    const auto xi = Subset::single(i);
    return FunctionObservable::from_function(space, [&](std::size_t k) { return static_cast<std::uint32_t>(space.key(xi, k)); });
  }
  throw UsageError("unknown observable '" + name + "' (identity, constant, random, edge:K, coord:I)");
}

Json cmd_conditional(const Options& o) {
  const auto src = sources(o, 1).front();
  const auto obs = make_observable(src, o);
  Json out = header(src);
  out["observable"] = o.observable;
  const auto stats = observable_stats(obs);
  out["label_entropy"] = stats.label_entropy;
  const double value = conditional_sk_value(obs);
  out["conditional_capacity"] = value;
  if (const auto* h = std::get_if<Hypergraph>(&src); h && h->uniform_size() && *h->uniform_size() >= 2 && h->m() >= 2) {
    const int t = *h->uniform_size();
    const double bound = double(t - 1) / double(h->m() - 1) * (h->edge_count() - stats.label_entropy);
    out["uniform_bound"] = bound;
  }
  return out;
}

Json cmd_club(const Options& o) {
  auto srcs = sources(o, 2);
  const bool both_pin = std::holds_alternative<Hypergraph>(srcs[0]) && std::holds_alternative<Hypergraph>(srcs[1]);
  if (both_pin)
    return club_json(club_relation(PinSource(std::get<Hypergraph>(srcs[0])).oracle(),
                                   PinSource(std::get<Hypergraph>(srcs[1])).oracle(), o.threads));
  auto real = [](const Instance& s) {
    if (const auto* h = std::get_if<Hypergraph>(&s)) return to_real(PinSource(*h).oracle());
    return std::get<TabularSource>(s).oracle();
  };
  return club_json(club_relation(real(srcs[0]), real(srcs[1]), o.threads));
}

Json cmd_alloc(const Options& o, int& exit_code) {
  try {
    check_allocation_range(o.m, o.t);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto state = run_allocation(o.m, o.t, o.trace);
  const auto claims = verify_claims(state);
  if (!claims.claim1_ok || !claims.claim2_ok) exit_code = kExitInternal;
  return allocation_json(state, o.trace);
}

Json cmd_lemma2(const Options& o, int& exit_code) {
  const auto src = sources(o, 1).front();
  const auto* h = std::get_if<Hypergraph>(&src);
  if (!h) throw PreconditionError("lemma2 runs on hypergraph PIN sources only");
  if (!h->uniform_size()) throw PreconditionError("lemma2 needs a t-uniform hypergraph");
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  const auto report = lemma2_check(*h, o.trials, o.seed, o.structured, o.threads);
  if (report.violations > 0) exit_code = kExitInternal;
  return lemma2_json(report);
}

int cmd_gen(const Options& o) {
  if (o.inputs.size() != 1) throw UsageError("gen takes exactly one generator spec");
  const auto& spec = o.inputs.front();
  const auto inst = from_generator(spec);
  const std::string text = std::holds_alternative<Hypergraph>(inst) ? std::get<Hypergraph>(inst).to_text(spec)
                                                                   : std::get<TabularSource>(inst).to_text(spec);
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + o.output + "'");
    out << text;
  }
  return 0;
}

void emit(const Options& o, const Json& report) {
  if (o.json) std::cout << report.dump(2) << '\n';
  else std::cout << render_text(report);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Secret-key capacity and communication complexity of multiterminal sources"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Emit JSON instead of text");
  app.add_option("--threads", o.threads, "Worker threads for parallel searches")->check(CLI::Range(1, 256));

  auto add_source = [&](CLI::App* cmd, std::size_t max) {
    cmd->add_option("inputs", o.inputs, "Source file (.hg hypergraph or .pmf joint distribution)")->expected(0, static_cast<int>(max));
    cmd->add_option("--gen", o.gens, "Generated source, e.g. complete-uniform:m=5,t=3")->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    cmd->add_option("--kind", o.kind, "Source kind when not inferable from the extension")->check(CLI::IsMember({"pin", "pmf"}));
  };

  auto* analyze = app.add_subcommand("analyze", "I(X_M), R_CO and the minimizing partitions");
  add_source(analyze, 1);
  analyze->add_flag("--lp", o.lp, "Also solve the fractional-partition LP and report a witness");
  analyze->add_option("--limit-minimizers", o.limit_minimizers, "Report at most N minimizers (0 = all)");
  analyze->add_flag("--allow-large", o.allow_large, "Lift the m <= 12 enumeration cap (up to m = 20)");

  auto* typecheck = app.add_subcommand("typecheck", "Is the singleton partition a minimizer?");
  add_source(typecheck, 1);

  auto* rsk = app.add_subcommand("rsk", "R_SK of a Type-S t-uniform PIN model");
  add_source(rsk, 1);

  auto* lp = app.add_subcommand("lp", "Fractional-partition LP and the uniform (m-1)-subset weights");
  add_source(lp, 1);

  auto* conditional = app.add_subcommand("conditional", "I(X_M | L) for an observable L of the whole source");
  add_source(conditional, 1);
  conditional->add_option("--observable", o.observable, "identity, constant, random, edge:K or coord:I");
  conditional->add_option("--seed", o.seed, "Seed for --observable random");

  auto* club_cmd = app.add_subcommand("club", "Capacities of two independent sources and of their pairing");
  add_source(club_cmd, 2);

  auto* alloc = app.add_subcommand("alloc", "Run the Q-term allocation on K_{m,t} and check its claims");
  alloc->add_option("--m", o.m, "Number of terminals")->required();
  alloc->add_option("--t", o.t, "Hyperedge size")->required();
  alloc->add_flag("--trace", o.trace, "Include the availability table after each allocation");

  auto* lemma2 = app.add_subcommand("lemma2", "Check sum_i I(X_i; L) <= t H(L) on random observables");
  add_source(lemma2, 1);
  lemma2->add_option("--trials", o.trials, "Number of random observables");
  lemma2->add_option("--seed", o.seed, "Base seed");
  lemma2->add_flag("--structured", o.structured, "Also run identity, constant and single-edge observables");

  auto* gen = app.add_subcommand("gen", "Write a generated instance file");
  gen->add_option("spec", o.inputs, "Generator spec, e.g. harary:m=6,k=3")->required()->expected(1);
  gen->add_option("-o,--output", o.output, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  int exit_code = 0;
  try {
    Json report;
    if (analyze->parsed()) report = cmd_analyze(o);
    else if (typecheck->parsed()) report = cmd_typecheck(o);
    else if (rsk->parsed()) report = cmd_rsk(o);
    else if (lp->parsed()) report = cmd_lp(o);
    else if (conditional->parsed()) report = cmd_conditional(o);
    else if (club_cmd->parsed()) report = cmd_club(o);
    else if (alloc->parsed()) report = cmd_alloc(o, exit_code);
    else if (lemma2->parsed()) report = cmd_lemma2(o, exit_code);
    else return cmd_gen(o);
    emit(o, report);
    if (exit_code == kExitInternal) std::cerr << "skcc: error: verification failed\n";
    return exit_code;
  } catch (const UsageError& e) {
    std::cerr << "skcc: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const char* kind = dynamic_cast<const CapError*>(&e)    ? "cap exceeded"
                       : code == kExitUsage                  ? "parse error"
                       : code == kExitPrecondition           ? "precondition not met"
                       : dynamic_cast<const InternalError*>(&e) ? "internal verification failure"
                                                              : "internal error";
    std::cerr << "skcc: " << kind << ": " << e.what() << '\n';
    return code;
  }
}
