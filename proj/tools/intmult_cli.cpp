// intmult: command-line front end. Every JSON document carries the resolved
// run configuration under "config".

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "intmult/classify/classify.hpp"
#include "intmult/errors.hpp"
#include "intmult/io/map_json.hpp"
#include "intmult/koenigs_eql/rigidity.hpp"
#include "intmult/maps/maps.hpp"
#include "intmult/periodic/periodic.hpp"

using namespace intmult;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 3;

struct Globals {
  long bits = 53;
  double tol = 0;  // 0: module default
  std::string out;
  std::string json_path;
};

// Usage problems that are not CLI11 parse errors (bad files, bad values).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// The JSON document goes to --json, else --out, else stdout.
void emit(const Globals& g, const json& j) { write_text(!g.json_path.empty() ? g.json_path : g.out, dump(j)); }

// "re" or "re,im"
Complex parse_complex(const std::string& s) {
  try {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return Complex(Real(s));
    return Complex(Real(s.substr(0, comma)), Real(s.substr(comma + 1)));
  } catch (const std::exception&) {
    throw UsageError("not a complex number: " + s);
  }
}

mpq_class parse_rational(const std::string& s) {
  try {
    mpq_class q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw UsageError("not a rational number: " + s);
  }
}

RationalMap load_map(const std::string& path) { return map_from_json(read_json(path)); }

PrecisionContext context(const Globals& g) {
  PrecisionContext ctx = PrecisionContext::with_bits(g.bits);
  ctx.validate();
  return ctx;
}

json base_config(const Globals& g, const std::string& command) {
  json c{{"command", command}, {"bits", g.bits}, {"tol", g.tol}};
  if (!g.out.empty()) c["out"] = g.out;
  if (!g.json_path.empty()) c["json"] = g.json_path;
  return c;
}

// ---- maps

struct MapsArgs {
  int d = 2;
  int sign = 1;
  std::string a = "0", b = "1";
};

int run_maps(const Globals& g, const std::string& family, const MapsArgs& m) {
  json config = base_config(g, "maps " + family);
  RationalMap f = power_map(2);
  if (family == "power") {
    f = power_map(m.d, m.sign);
    config["d"] = m.d;
    config["sign"] = m.sign;
  } else if (family == "chebyshev") {
    f = chebyshev(m.d, m.sign);
    config["d"] = m.d;
    config["sign"] = m.sign;
  } else {
    f = lattes_doubling(EllipticCurveData{parse_rational(m.a), parse_rational(m.b)});
    config["a"] = m.a;
    config["b"] = m.b;
  }
  json j = map_to_json(f);
  j["description"] = describe(f);
  j["config"] = config;
  emit(g, j);
  return 0;
}

// ---- spectrum

struct SpectrumArgs {
  std::string map;
  int pmax = 2;
};

int run_spectrum(const Globals& g, const SpectrumArgs& a) {
  const RationalMap f = load_map(a.map);
  const PrecisionContext ctx = context(g);
  const MultiplierSpectrum s = multiplier_spectrum(f, a.pmax, ctx);
  // CSV to --out, or to stdout unless only --json was asked for
  if (!g.out.empty() || g.json_path.empty()) write_text(g.out, spectrum_to_csv(s));
  if (!g.json_path.empty()) {
    json config = base_config(g, "spectrum");
    config["map"] = a.map;
    config["pmax"] = a.pmax;
    json periods = json::object();
    for (const auto& [p, orbits] : s.by_period) {
      json list = json::array();
      for (const auto& o : orbits) list.push_back(orbit_to_json(o));
      periods[std::to_string(p)] = list;
    }
    write_text(g.json_path, dump({{"config", config},
                                  {"degree", s.map_degree},
                                  {"periods", periods},
                                  {"flagged_periods", s.flagged_periods}}));
  }
  return 0;
}

// ---- classify

struct ClassifyArgs {
  std::string map;
  int pmax = 4;
  long dmax = kDefaultDMax;
  bool eql_check = false;
};

int run_classify(const Globals& g, const ClassifyArgs& a) {
  const RationalMap f = load_map(a.map);
  const PrecisionContext ctx = context(g);
  ClassifyOptions o;
  o.tol = g.tol;
  o.eql_cross_check = a.eql_check;
  const ClassificationVerdict v = classify_map(f, a.pmax, a.dmax, ctx, o);
  json config = base_config(g, "classify");
  config["map"] = a.map;
  config["pmax"] = a.pmax;
  config["dmax"] = a.dmax;
  config["eql_check"] = a.eql_check;
  json j = classification_to_json(v);
  j["config"] = config;
  emit(g, j);
  switch (v.status) {
    case ClassificationStatus::consistent: return 0;
    case ClassificationStatus::refuted: return 1;
    case ClassificationStatus::inconclusive: return 2;
  }
  return 2;
}

// ---- koenigs

struct KoenigsArgs {
  std::string map;
  std::string z1 = "0";
  double radius = 0.5;
  int N = 0;
  int order = 16;
  std::vector<std::string> at;
};

int run_koenigs(const Globals& g, const KoenigsArgs& a) {
  const RationalMap f = load_map(a.map);
  const PrecisionContext ctx = context(g);
  PrecisionScope scope(ctx.mantissa_bits);
  auto F = std::make_shared<const RationalEvaluator>(f);
  const Complex z1 = parse_complex(a.z1);
  KoenigsOptions o;
  o.N = a.N;
  o.taylor_order = a.order;
  const Complex lambda = F->jet(z1).d1;
  const KoenigsChart chart = koenigs_chart(F, z1, lambda, Disk{z1, Real(a.radius)}, o, ctx);
  json values = json::array();
  for (const auto& s : a.at) {
    const Complex z = parse_complex(s);
    const Jet2 j = chart.forward(z);
    values.push_back({{"z", complex_to_json(z)}, {"phi", complex_to_json(j.v)}, {"dphi", complex_to_json(j.d1)}});
  }
  json config = base_config(g, "koenigs");
  config["map"] = a.map;
  config["z1"] = a.z1;
  config["radius"] = a.radius;
  config["N"] = a.N;
  config["order"] = a.order;
  config["at"] = a.at;
  json j = chart_to_json(chart);
  j["values"] = values;
  j["config"] = config;
  emit(g, j);
  return 0;
}

// ---- eql

struct EqlArgs {
  std::string map;
  std::string eql;
  std::string trace;
  int p_search = 3;
  int depth = 12;
  int nmax = 12;
  double affinity_tol = 1e-6;
  int samples = 16;
};

int run_eql_extract(const Globals& g, const EqlArgs& a) {
  const RationalMap f = load_map(a.map);
  const PrecisionContext ctx = context(g);
  ExtractOptions o;
  o.p_search_max = a.p_search;
  o.depth_max = a.depth;
  const Extraction ex = extract_eql(f, o, ctx);
  json config = base_config(g, "eql extract");
  config["map"] = a.map;
  config["p_search"] = a.p_search;
  config["depth"] = a.depth;
  if (!a.trace.empty()) config["trace"] = a.trace;
  json j = eql_to_json(ex.eql);
  j["invariants"] = invariants_to_json(check_invariants(ex.eql, ctx));
  j["config"] = config;
  emit(g, j);
  if (!a.trace.empty()) {
    json t = trace_to_json(ex.trace);
    t["config"] = config;
    write_text(a.trace, dump(t));
  }
  return 0;
}

EscapingQuadraticLike load_eql(const EqlArgs& a, const PrecisionContext& ctx) {
  if (!a.eql.empty()) return eql_from_json(read_json(a.eql));
  if (!a.map.empty()) return extract_eql(load_map(a.map), ExtractOptions{}, ctx).eql;
  throw UsageError("one of --eql or --map is required");
}

int run_eql_verify(const Globals& g, const EqlArgs& a) {
  const PrecisionContext ctx = context(g);
  PrecisionScope scope(ctx.mantissa_bits);
  const EscapingQuadraticLike eql = load_eql(a, ctx);
  const Real tol = g.tol > 0 ? Real(g.tol) : ctx.tol();
  const NormalizedEql ne = normalize_to_koenigs(eql, KoenigsOptions{}, ctx);
  const auto samples = wn_sequence(ne, a.nmax, ctx);
  const AsymptoticFit fit = fit_ab(ne, ctx);
  const ClaimReport claim = verify_claim_recurrence(samples, ne.lambda1(), fit.a, fit.b, tol);
  const OdeReport ode = ode_residual(ne, fit, a.samples, ctx);
  const SecondIterateReport second = second_iterate_check(ne, fit, a.samples, ctx);
  const AffinityVerdict aff = affinity_test(ne, Real(a.affinity_tol), a.samples, ctx);
  const NormalizationReport norm = check_normalization(ne, 100, ctx);

  json config = base_config(g, "eql verify");
  if (!a.eql.empty()) config["eql"] = a.eql;
  if (!a.map.empty()) config["map"] = a.map;
  config["nmax"] = a.nmax;
  config["affinity_tol"] = a.affinity_tol;
  config["samples"] = a.samples;
  json wn = json::array();
  for (const auto& s : samples) wn.push_back(wn_to_json(s));
  json j{{"config", config},
         {"invariants", invariants_to_json(check_invariants(eql, ctx))},
         {"normalization",
          {{"linearity", norm.linearity.to_double()},
           {"hausdorff", norm.hausdorff.to_double()},
           {"z1_image", norm.z1_image.to_double()}}},
         {"a", complex_to_json(fit.a)},
         {"b", complex_to_json(fit.b)},
         {"a_hat", complex_to_json(second.a_hat)},
         {"b_hat", complex_to_json(second.b_hat)},
         {"fit", fit_to_json(fit)},
         {"wn", wn},
         {"claim", claim_to_json(claim)},
         {"ode", ode_to_json(ode)},
         {"second_iterate", second_iterate_to_json(second)},
         {"affinity", affinity_to_json(aff)}};
  emit(g, j);
  return 0;
}

int run_wn(const Globals& g, const EqlArgs& a) {
  const PrecisionContext ctx = context(g);
  PrecisionScope scope(ctx.mantissa_bits);
  const EscapingQuadraticLike eql = load_eql(a, ctx);
  const NormalizedEql ne = normalize_to_koenigs(eql, KoenigsOptions{}, ctx);
  const auto samples = wn_sequence(ne, a.nmax, ctx);
  json config = base_config(g, "wn");
  if (!a.eql.empty()) config["eql"] = a.eql;
  if (!a.map.empty()) config["map"] = a.map;
  config["nmax"] = a.nmax;
  json wn = json::array();
  for (const auto& s : samples) wn.push_back(wn_to_json(s));
  emit(g, {{"config", config}, {"lambda1", complex_to_json(ne.lambda1())}, {"samples", wn}});
  return 0;
}

// ---- verify-suite

int run_suite(const Globals& g, int pmax) {
  const PrecisionContext ctx = context(g);
  const SuiteReport r = verify_exceptional_suite(pmax, ctx, g.tol);
  json config = base_config(g, "verify-suite");
  config["pmax"] = pmax;
  json j = suite_to_json(r);
  j["config"] = config;
  emit(g, j);
  return r.pass ? 0 : 1;
}

void report_error(const std::string& code, const std::string& message) {
  std::cerr << json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer multipliers: spectra, field membership and quadratic-like rigidity checks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--bits", g.bits, "mantissa bits")->capture_default_str();
  app.add_option("--tol", g.tol, "tolerance (0 picks the default for --bits)")->capture_default_str();
  app.add_option("--out", g.out, "output path (stdout when absent)");
  app.add_option("--json", g.json_path, "JSON output path");

  std::function<int()> action;

  auto* maps = app.add_subcommand("maps", "emit the JSON of a built-in map")->fallthrough();
  maps->require_subcommand(1);
  MapsArgs margs;
  for (const char* family : {"power", "chebyshev"}) {
    auto* sub = maps->add_subcommand(family, std::string(family) == "power" ? "z^d" : "Chebyshev T_d")->fallthrough();
    sub->add_option("--d", margs.d, "degree")->capture_default_str();
    sub->add_option("--sign", margs.sign, "+1 or -1")->check(CLI::IsMember({-1, 1}))->capture_default_str();
    sub->callback([&, family] { action = [&, family] { return run_maps(g, family, margs); }; });
  }
  auto* lattes = maps->add_subcommand("lattes", "doubling map of y^2 = x^3 + a x + b")->fallthrough();
  lattes->add_option("--a", margs.a, "rational a")->capture_default_str();
  lattes->add_option("--b", margs.b, "rational b")->capture_default_str();
  lattes->callback([&] { action = [&] { return run_maps(g, "lattes", margs); }; });

  SpectrumArgs sargs;
  auto* spectrum = app.add_subcommand("spectrum", "multipliers of all periodic orbits up to --pmax")->fallthrough();
  spectrum->add_option("--map", sargs.map, "map JSON")->required();
  spectrum->add_option("--pmax", sargs.pmax, "largest period")->capture_default_str();
  spectrum->callback([&] { action = [&] { return run_spectrum(g, sargs); }; });

  ClassifyArgs cargs;
  auto* classify = app.add_subcommand("classify", "exit 0 consistent, 1 refuted, 2 inconclusive")->fallthrough();
  classify->add_option("--map", cargs.map, "map JSON")->required();
  classify->add_option("--pmax", cargs.pmax, "largest period")->capture_default_str();
  classify->add_option("--dmax", cargs.dmax, "largest squarefree d")->capture_default_str();
  classify->add_flag("--eql-check", cargs.eql_check, "on refutation, also run the affinity test");
  classify->callback([&] { action = [&] { return run_classify(g, cargs); }; });

  KoenigsArgs kargs;
  auto* koenigs = app.add_subcommand("koenigs", "Koenigs chart at a repelling fixed point")->fallthrough();
  koenigs->add_option("--map", kargs.map, "map JSON")->required();
  koenigs->add_option("--z1", kargs.z1, "fixed point, re or re,im")->capture_default_str();
  koenigs->add_option("--radius", kargs.radius, "domain radius")->capture_default_str();
  koenigs->add_option("--N", kargs.N, "fixed depth (0 escalates)")->capture_default_str();
  koenigs->add_option("--order", kargs.order, "Taylor order of the chart at z1")->capture_default_str();
  koenigs->add_option("--at", kargs.at, "points where phi is evaluated");
  koenigs->callback([&] { action = [&] { return run_koenigs(g, kargs); }; });

  EqlArgs eargs;
  auto* eql = app.add_subcommand("eql", "escaping quadratic-like restrictions")->fallthrough();
  eql->require_subcommand(1);
  auto* extract = eql->add_subcommand("extract", "extract from a rational map")->fallthrough();
  extract->add_option("--map", eargs.map, "map JSON")->required();
  extract->add_option("--trace", eargs.trace, "extraction trace JSON path");
  extract->add_option("--p-search", eargs.p_search, "largest period searched for z1")->capture_default_str();
  extract->add_option("--depth", eargs.depth, "preimage search depth")->capture_default_str();
  extract->callback([&] { action = [&] { return run_eql_extract(g, eargs); }; });
  auto* verify = eql->add_subcommand("verify", "w_n, fit, recurrence, ODE, second iterate, affinity")->fallthrough();
  verify->add_option("--eql", eargs.eql, "EQL JSON from eql extract");
  verify->add_option("--map", eargs.map, "map JSON (extracts first)");
  verify->add_option("--nmax", eargs.nmax, "largest n")->capture_default_str();
  verify->add_option("--affinity-tol", eargs.affinity_tol, "relative affinity tolerance")->capture_default_str();
  verify->add_option("--samples", eargs.samples, "samples per circle")->capture_default_str();
  verify->callback([&] { action = [&] { return run_eql_verify(g, eargs); }; });

  auto* wn = app.add_subcommand("wn", "the fixed points w_n and multipliers rho_n")->fallthrough();
  wn->add_option("--eql", eargs.eql, "EQL JSON");
  wn->add_option("--map", eargs.map, "map JSON (extracts first)");
  wn->add_option("--nmax", eargs.nmax, "largest n")->capture_default_str();
  wn->callback([&] { action = [&] { return run_wn(g, eargs); }; });

  int suite_pmax = 3;
  auto* suite = app.add_subcommand("verify-suite", "integrality over the built-in exceptional maps")->fallthrough();
  suite->add_option("--pmax", suite_pmax, "largest period (1..4)")->capture_default_str();
  suite->callback([&] { action = [&] { return run_suite(g, suite_pmax); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    report_error("usage", e.what());
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    report_error(e.code(), e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(e.code(), e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return kExitFailure;
  }
}
