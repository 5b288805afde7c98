#include "intmult/classify/classify.hpp"

#include <cmath>

#include "intmult/errors.hpp"
#include "intmult/koenigs_eql/rigidity.hpp"
#include "intmult/maps/maps.hpp"
#include "intmult/numerics/exact.hpp"

namespace intmult {

std::string to_string(ClassificationStatus s) {
  switch (s) {
    case ClassificationStatus::consistent: return "consistent";
    case ClassificationStatus::refuted: return "refuted";
    case ClassificationStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

std::vector<MultiplierRecord> collect_multipliers(const MultiplierSpectrum& s) {
  std::vector<MultiplierRecord> out;
  for (const auto& [p, orbits] : s.by_period) {
    for (const auto& o : orbits) {
      out.push_back(MultiplierRecord{p, o.points.front(), o.multiplier, o.multiplier_residual});
    }
  }
  return out;
}

void run_eql_cross_check(const RationalMap& f, const ClassifyOptions& opts, const PrecisionContext& ctx,
                         ClassificationVerdict& v) {
  try {
    const Extraction ex = extract_eql(f, ExtractOptions{}, ctx);
    const NormalizedEql ne = normalize_to_koenigs(ex.eql, KoenigsOptions{}, ctx);
    const AffinityVerdict a = affinity_test(ne, Real(opts.affinity_tol), 16, ctx);
    v.eql_affinity = a.affine_conjugate;
    v.eql_defect_ratio = (a.sup_defect / a.radius).to_double();
  } catch (const Error& e) {
    v.diagnostics += std::string(v.diagnostics.empty() ? "" : "; ") + "EQL cross-check failed: " + e.what();
  }
}

}  // namespace

ClassificationVerdict classify_map(const RationalMap& f, int p_max, long d_max, const PrecisionContext& ctx,
                                   const ClassifyOptions& opts) {
  ctx.validate();
  if (f.degree() < 2) throw InvalidArgument("classify_map needs degree >= 2");
  if (p_max < 1 || d_max < 1) throw InvalidArgument("p_max and d_max must be positive");
  PrecisionScope scope(ctx.mantissa_bits);
  ClassificationVerdict v;
  v.p_max_used = p_max;
  v.d_max_used = d_max;
  v.precision_used = ctx.mantissa_bits;
  v.tol = opts.tol > 0 ? Real(opts.tol) : default_membership_tol(ctx.mantissa_bits);
  const Real reject = v.tol * Real(10L);

  std::vector<MultiplierRecord> mults;
  try {
    const MultiplierSpectrum s = multiplier_spectrum(f, p_max, ctx);
    mults = collect_multipliers(s);
    if (!s.flagged_periods.empty()) v.diagnostics = "point count short of degree^p + 1 at some period";
  } catch (const Error& e) {
    v.diagnostics = std::string("spectrum failed: ") + e.what();
    return v;
  }
  for (const auto& m : mults) {
    if (m.residual > v.tol) {
      v.diagnostics = "multiplier residual " + m.residual.to_string(3) + " exceeds tol at period " +
                      std::to_string(m.period);
      return v;
    }
  }

  std::vector<long> ds;
  for (long d = 1; d <= d_max; ++d) {
    if (is_squarefree(d)) ds.push_back(d);
  }
  // distance of every multiplier to every ring
  std::vector<std::vector<Real>> dist(mults.size());
  try {
    for (std::size_t i = 0; i < mults.size(); ++i) {
      for (long d : ds) dist[i].push_back(nearest_lattice_point(mults[i].multiplier, make_field(d)).distance);
    }
  } catch (const Error& e) {
    v.diagnostics = std::string("lattice search failed: ") + e.what();
    return v;
  }

  for (std::size_t k = 0; k < ds.size(); ++k) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < mults.size(); ++i) {
      if (dist[i][k] > dist[worst][k]) worst = i;
    }
    const Real& w = dist[worst][k];
    if (w > reject) {
      v.rejections.push_back(FieldRejection{ds[k], mults[worst], w});
    } else if (w > v.tol) {
      v.fields_ambiguous.push_back(ds[k]);
    } else {
      v.fields_surviving.push_back(ds[k]);
    }
  }

  // single-multiplier witness: the largest minimal distance over all d
  std::optional<std::size_t> best;
  Real best_min(-1L);
  for (std::size_t i = 0; i < mults.size(); ++i) {
    Real m = Real::infinity();
    for (const auto& x : dist[i]) m = min(m, x);
    if (m > best_min) {
      best_min = m;
      best = i;
    }
  }
  if (!v.fields_surviving.empty()) {
    v.status = ClassificationStatus::consistent;
  } else if (v.fields_ambiguous.empty() && !v.rejections.empty()) {
    v.status = ClassificationStatus::refuted;
    Witness w{mults[*best], {}, best_min};
    for (std::size_t k = 0; k < ds.size(); ++k) w.distances.emplace_back(ds[k], dist[*best][k]);
    v.witness = std::move(w);
    if (opts.eql_cross_check) run_eql_cross_check(f, opts, ctx, v);
  } else {
    v.status = ClassificationStatus::inconclusive;
    if (v.diagnostics.empty()) v.diagnostics = "some fields are neither accepted nor rejected at 10 tol";
  }
  return v;
}

SuiteReport verify_exceptional_suite(int p_max, const PrecisionContext& ctx, double tol) {
  ctx.validate();
  if (p_max < 1 || p_max > 4) throw InvalidArgument("p_max must be in 1..4 (degree-4 maps hit the iterate cap)");
  PrecisionScope scope(ctx.mantissa_bits);
  SuiteReport r;
  r.p_max = p_max;
  r.tol = tol > 0 ? Real(tol) : default_membership_tol(ctx.mantissa_bits);
  std::vector<std::pair<std::string, RationalMap>> corpus;
  for (int d = 2; d <= 4; ++d) corpus.emplace_back("power " + std::to_string(d), power_map(d));
  for (int d = 2; d <= 4; ++d) {
    corpus.emplace_back("chebyshev " + std::to_string(d), chebyshev(d));
    corpus.emplace_back("-chebyshev " + std::to_string(d), chebyshev(d, -1));
  }
  corpus.emplace_back("lattes (0,1)", lattes_doubling(EllipticCurveData{0, 1}));
  corpus.emplace_back("lattes (1,0)", lattes_doubling(EllipticCurveData{1, 0}));

  r.pass = true;
  for (const auto& [name, f] : corpus) {
    SuiteEntry e;
    e.name = name;
    e.worst_distance = Real(0L);
    try {
      const MultiplierSpectrum s = multiplier_spectrum(f, p_max, ctx);
      for (const auto& m : collect_multipliers(s)) {
        const Real re = m.multiplier.re();
        const Real d = abs(m.multiplier - Complex(Real(std::round(re.to_double()))));
        e.worst_distance = max(e.worst_distance, d);
        ++e.multipliers;
      }
      e.pass = e.worst_distance <= r.tol && s.flagged_periods.empty();
      if (!s.flagged_periods.empty()) e.error = "point count short of degree^p + 1";
    } catch (const Error& ex) {
      e.error = ex.what();
    }
    r.pass = r.pass && e.pass;
    r.entries.push_back(std::move(e));
  }
  return r;
}

nlohmann::json record_to_json(const MultiplierRecord& r) {
  return {{"period", r.period},
          {"representative", r.representative.infinite ? nlohmann::json("inf") : complex_to_json(r.representative.z)},
          {"multiplier", complex_to_json(r.multiplier)},
          {"residual", r.residual.to_double()}};
}

nlohmann::json classification_to_json(const ClassificationVerdict& v) {
  nlohmann::json j{{"status", to_string(v.status)},
                   {"fields_surviving", v.fields_surviving},
                   {"fields_ambiguous", v.fields_ambiguous},
                   {"p_max_used", v.p_max_used},
                   {"d_max_used", v.d_max_used},
                   {"precision_used", v.precision_used},
                   {"tol", v.tol.to_double()},
                   {"note", "consistent up to period " + std::to_string(v.p_max_used) + " only"}};
  nlohmann::json rej = nlohmann::json::array();
  for (const auto& r : v.rejections) {
    rej.push_back({{"d", r.d}, {"distance", r.distance.to_double()}, {"multiplier", record_to_json(r.by)}});
  }
  j["rejections"] = rej;
  if (v.witness) {
    nlohmann::json dists = nlohmann::json::array();
    for (const auto& [d, x] : v.witness->distances) dists.push_back({{"d", d}, {"distance", x.to_double()}});
    j["witness"] = {{"multiplier", record_to_json(v.witness->record)},
                    {"min_distance", v.witness->min_distance.to_double()},
                    {"distances", dists}};
  } else {
    j["witness"] = nullptr;
  }
  j["eql_affinity"] = v.eql_affinity ? nlohmann::json(*v.eql_affinity) : nlohmann::json(nullptr);
  j["eql_defect_ratio"] = v.eql_defect_ratio ? nlohmann::json(*v.eql_defect_ratio) : nlohmann::json(nullptr);
  j["diagnostics"] = v.diagnostics;
  return j;
}

nlohmann::json suite_to_json(const SuiteReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"name", e.name},
                       {"pass", e.pass},
                       {"multipliers", e.multipliers},
                       {"worst_distance", e.worst_distance.to_double()},
                       {"error", e.error}});
  }
  return {{"p_max", r.p_max}, {"tol", r.tol.to_double()}, {"pass", r.pass}, {"entries", entries}};
}

}  // namespace intmult
