#include <cmath>
#include <complex>

#include "doctest.h"
#include "intmult/errors.hpp"
#include "intmult/koenigs_eql/rigidity.hpp"
#include "intmult/maps/maps.hpp"

using namespace intmult;
using cd = std::complex<double>;

namespace {

const PrecisionContext k53 = PrecisionContext::with_bits(53);

double dabs(const Complex& z) { return abs(z).to_double(); }

std::shared_ptr<const MapEvaluator> rational(const ExactPolynomial& p) {
  return std::make_shared<RationalEvaluator>(RationalMap(p));
}

// extractions are reused across cases
const Extraction& extraction(const std::string& which) {
  static std::map<std::string, Extraction> cache;
  auto it = cache.find(which);
  if (it == cache.end()) {
    PrecisionScope scope(53);
    const ExactPolynomial p = which == "z^2" ? ExactPolynomial{0, 0, 1}
                              : which == "z^2-2" ? ExactPolynomial{-2, 0, 1}
                                                 : ExactPolynomial{1, 0, 1};
    it = cache.emplace(which, extract_eql(RationalMap(p), ExtractOptions{}, k53)).first;
  }
  return it->second;
}

const NormalizedEql& normalized(const std::string& which) {
  static std::map<std::string, NormalizedEql> cache;
  auto it = cache.find(which);
  if (it == cache.end()) it = cache.emplace(which, normalize_to_koenigs(extraction(which).eql, {}, k53)).first;
  return it->second;
}

// quadratic model parameters: f1 = 5z on D(0, 4/5), f2(z) = 3 + 4(z-3) + (z-3)^2/10
struct QuadOracle {
  cd lambda = 5, c = 3, s = 4, q = 0.1;
  // g2(v) with the root of q u^2 + s u - (v - c) near (v - c)/s
  cd u_of(cd v) const { return (-s + std::sqrt(s * s + 4.0 * q * (v - c))) / (2.0 * q); }
  cd g2(cd v) const { return c + u_of(v); }
  cd g2p(cd v) const { return 1.0 / (s + 2.0 * q * u_of(v)); }
  cd g2pp(cd v) const {
    const cd d = g2p(v);
    return -2.0 * q * d * d * d;
  }
};

}  // namespace

TEST_CASE("series helpers and jets") {
  PrecisionScope scope(53);
  const Series a{Complex(1L), Complex(1L)};  // 1 + t
  const Series sq = series_mul(a, a, 3);
  CHECK(dabs(sq[0] - Complex(1L)) == 0);
  CHECK(dabs(sq[1] - Complex(2L)) == 0);
  CHECK(dabs(sq[2] - Complex(1L)) == 0);
  CHECK(dabs(sq[3]) == 0);
  // b(x) = x^2 composed with a(t) - a0 = t gives t^2
  const Series b{Complex(0L), Complex(0L), Complex(1L)};
  const Series c = series_compose(b, a, 3);
  CHECK(dabs(c[2] - Complex(1L)) == 0);
  CHECK(dabs(c[1]) == 0);

  // (z^2)^-1 at 4: sqrt, derivatives 1/(2 sqrt v) and -1/(4 v^(3/2))
  const Jet2 F{Complex(4L), Complex(4L), Complex(2L)};
  const Jet2 g = inverse_jet(Complex(2L), F);
  CHECK(dabs(g.d1 - Complex(0.25)) < 1e-16);
  CHECK(dabs(g.d2 - Complex(-1.0 / 32)) < 1e-16);
  // exp o (3z) at 0
  const Jet2 u{Complex(1L), Complex(1L), Complex(1L)};
  const Jet2 v{Complex(0L), Complex(3L), Complex(0L)};
  const Jet2 w = compose_jets(u, v);
  CHECK(dabs(w.d1 - Complex(3L)) == 0);
  CHECK(dabs(w.d2 - Complex(9L)) == 0);
}

TEST_CASE("Taylor coefficients of evaluators") {
  PrecisionScope scope(53);
  SUBCASE("1/(1-z) at 0 is the geometric series") {
    RationalEvaluator ev(RationalMap(ExactPolynomial{1}, ExactPolynomial{1, -1}));
    const auto t = ev.taylor(Complex(0L), 8);
    REQUIRE(t.size() == 9);
    for (const auto& c : t) CHECK(dabs(c - Complex(1L)) < 1e-15);
  }
  SUBCASE("second iterate of z^2 at 1 is (1+t)^4") {
    IterateEvaluator it(rational({0, 0, 1}), 2);
    const auto t = it.taylor(Complex(1L), 6);
    const double binom[] = {1, 4, 6, 4, 1, 0, 0};
    for (int k = 0; k <= 6; ++k) CHECK(dabs(t[k] - Complex(binom[k])) < 1e-14);
    const Jet2 j = it.jet(Complex(1L));
    CHECK(dabs(j.d1 - Complex(4L)) == 0);
    CHECK(dabs(j.d2 - Complex(12L)) == 0);
  }
}

TEST_CASE("inverse branch continuation") {
  PrecisionScope scope(53);
  RationalEvaluator sq(RationalMap(ExactPolynomial{0, 0, 1}));
  SUBCASE("principal square root from the seed (1, 1)") {
    const cd v(0, 4);
    const Jet2 g = continue_inverse(sq, BranchDescriptor{Complex(1L), Complex(1L)}, Complex(v));
    CHECK(std::abs(g.v.to_std() - std::sqrt(v)) < 1e-14);
    CHECK(std::abs(g.d1.to_std() - 0.5 / std::sqrt(v)) < 1e-14);
  }
  SUBCASE("the other branch from the seed (1, -1)") {
    const Jet2 g = continue_inverse(sq, BranchDescriptor{Complex(1L), Complex(-1L)}, Complex(9L));
    CHECK(dabs(g.v - Complex(-3L)) < 1e-14);
  }
  SUBCASE("a seed that does not solve the equation") {
    CHECK_THROWS_AS(continue_inverse(sq, BranchDescriptor{Complex(1L), Complex(0L)}, Complex(2L)),
                    ContractionFailure);
  }
  SUBCASE("newton_solve") {
    CHECK(dabs(newton_solve(sq, Complex(2L), Complex(1L)) - Complex(sqrt(Real(2L)))) < 1e-15);
  }
}

TEST_CASE("Koenigs chart of 2z + z^2 is log(1 + z)") {
  PrecisionScope scope(53);
  auto F = rational({0, 2, 1});
  const Disk D{Complex(0L), Real(0.5)};
  SUBCASE("coefficients") {
    const auto c = koenigs_coefficients(F->taylor(Complex(0L), 10), 10);
    for (int k = 1; k <= 10; ++k) CHECK(dabs(c[k] - Complex((k % 2 ? 1.0 : -1.0) / k)) < 1e-15);
  }
  SUBCASE("Taylor-accelerated chart") {
    const KoenigsChart chart = koenigs_chart(F, Complex(0L), Complex(2L), D, {}, k53);
    const Jet2 j = chart.forward(Complex(0.1));
    CHECK(std::abs(j.v.to_std() - std::log(1.1)) < 1e-10);
    CHECK(std::abs(j.d1.to_std() - 1 / 1.1) < 1e-10);
    CHECK(std::abs(j.d2.to_std() + 1 / 1.21) < 1e-9);
    CHECK(chart.residual().to_double() < 1e-10);
    const cd z(0.2, -0.3);
    CHECK(std::abs(chart.forward(Complex(z)).v.to_std() - std::log(1.0 + z)) < 1e-12);
    CHECK(std::abs(chart.inverse(Complex(std::log(1.0 + z))).to_std() - z) < 1e-12);
    CHECK(dabs(chart.inverse(Complex(0L))) == 0);
  }
  SUBCASE("plain iterates (order 1)") {
    KoenigsOptions o;
    o.taylor_order = 1;
    const KoenigsChart chart = koenigs_chart(F, Complex(0L), Complex(2L), D, o, k53);
    CHECK(chart.N() > 20);
    CHECK(std::abs(chart.forward(Complex(0.1)).v.to_std() - std::log(1.1)) < 1e-10);
  }
  SUBCASE("fixed depth") {
    KoenigsOptions o;
    o.N = 3;
    const KoenigsChart chart = koenigs_chart(F, Complex(0L), Complex(2L), D, o, k53);
    CHECK(chart.N() == 3);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(koenigs_chart(F, Complex(0L), Complex(3L), D, {}, k53), InvalidArgument);
    CHECK_THROWS_AS(koenigs_chart(F, Complex(0.3), Complex(2L), D, {}, k53), InvalidArgument);
    // z/2 + z^2: attracting at 0
    CHECK_THROWS_AS(koenigs_chart(std::make_shared<RationalEvaluator>(
                                      RationalMap(ExactPolynomial({ExactScalar(0L), ExactScalar(mpq_class(1, 2)),
                                                                   ExactScalar(1L)}))),
                                  Complex(0L), Complex(0.5), D, {}, k53),
                    InvalidArgument);
    KoenigsOptions bad;
    bad.taylor_order = 0;
    CHECK_THROWS_AS(koenigs_chart(F, Complex(0L), Complex(2L), D, bad, k53), InvalidArgument);
  }
  SUBCASE("JSON") {
    const auto j = chart_to_json(koenigs_chart(F, Complex(0L), Complex(2L), D, {}, k53));
    CHECK(j["taylor_order"] == 16);
    CHECK(j["residual"].get<double>() < 1e-10);
  }
}

TEST_CASE("Koenigs chart of a linear map is the identity") {
  PrecisionScope scope(53);
  const KoenigsChart chart =
      koenigs_chart(rational({0, 3}), Complex(0L), Complex(3L), Disk{Complex(0L), Real(1L)}, {}, k53);
  const Complex z(0.3, 0.4);
  CHECK(dabs(chart.forward(z).v - z) < 1e-15);
  CHECK(dabs(chart.forward(z).d1 - Complex(1L)) < 1e-15);
}

TEST_CASE("affine model") {
  PrecisionScope scope(53);
  // f1 = 3z, f2 = 4z + 8 on V = D(0, 3)
  const auto e = affine_model(Complex(3L), Complex(4L), Complex(8L), Real(3L), k53);
  const auto inv = check_invariants(e, k53);
  CHECK(inv.ok);
  CHECK(inv.right_inverse.to_double() < 1e-14);
  CHECK(dabs(e.z2 - Complex(-8.0 / 3)) < 1e-15);
  const NormalizedEql ne = normalize_to_koenigs(e, {}, k53);
  CHECK_FALSE(ne.has_chart());
  CHECK_THROWS_AS(ne.chart(), InvalidArgument);

  const auto ws = wn_sequence(ne, 8, k53);
  REQUIRE(ws.size() == 8);
  for (const auto& s : ws) {
    // w = -8 / (4 - 3^(1-n)), rho = 4 * 3^(n-1)
    const double l = std::pow(3.0, s.n - 1);
    CHECK(std::abs(s.w_n.to_std() + 8.0 / (4.0 - 1.0 / l)) < 1e-13);
    CHECK(std::abs(s.rho_n.to_std() - 4.0 * l) < 1e-12 * l);
    CHECK(s.rho_residual.to_double() < 1e-14);
    CHECK(s.exact_period);
  }
  const AsymptoticFit fit = fit_ab(ne, k53);
  CHECK(dabs(fit.alpha - Complex(-2L)) < 1e-15);
  CHECK(dabs(fit.a - Complex(4L)) < 1e-15);
  CHECK(dabs(fit.b) == 0);
  CHECK(dabs(fit.beta - Complex(-0.5)) < 1e-15);

  const ClaimReport claim = verify_claim_recurrence(ws, ne.lambda1(), fit.a, fit.b, Real(1e-9));
  CHECK(claim.holds);
  CHECK(claim.eps_decays);

  const auto si = second_iterate_check(ne, fit, 8, k53);
  CHECK(dabs(si.a_hat - Complex(16L)) < 1e-13);
  CHECK(si.defect.to_double() == 0);
  CHECK(si.diamond_residual.to_double() < 1e-12);

  const auto aff = affinity_test(ne, Real(1e-6), 16, k53);
  CHECK(aff.affine_conjugate);
  CHECK(aff.sup_defect.to_double() < 1e-13);

  const auto ode = ode_residual(ne, fit, 8, k53);
  CHECK(ode.residual.to_double() < 1e-13);
  CHECK(ode.samples == 24);

  // slope too small for g2(V) to fit inside V
  CHECK_THROWS_AS(affine_model(Complex(3L), Complex(1.2), Complex(0.5), Real(3L), k53), InvalidArgument);
}

TEST_CASE("quadratic model") {
  PrecisionScope scope(53);
  const QuadOracle o;
  const auto e = quadratic_model(Complex(5L), Complex(3L), Complex(4L), Complex(0.1), Real(4L), k53);
  CHECK(check_invariants(e, k53).ok);
  const NormalizedEql ne = normalize_to_koenigs(e, {}, k53);

  SUBCASE("fit against the closed form") {
    const AsymptoticFit fit = fit_ab(ne, k53);
    const cd alpha = o.g2(0.0);
    CHECK(std::abs(o.c + o.s * (alpha - o.c) + o.q * (alpha - o.c) * (alpha - o.c)) < 1e-14);
    const cd a = 4.0 + (alpha - 3.0) / 5.0;
    const cd b = alpha / (5.0 * a);
    CHECK(std::abs(fit.alpha.to_std() - alpha) < 1e-14);
    CHECK(std::abs(fit.a.to_std() - a) < 1e-13);
    CHECK(std::abs(fit.b.to_std() - b) < 1e-13);
    CHECK(std::abs(b) > 0.05);
  }
  SUBCASE("w_n and the recurrence") {
    const auto ws = wn_sequence(ne, 10, k53);
    for (const auto& s : ws) {
      // independent fixed point of g2(w / 5^(n-1)) in double precision
      cd w = 0;
      const double l = std::pow(5.0, s.n - 1);
      for (int i = 0; i < 200; ++i) w = o.g2(w / l);
      CHECK(std::abs(s.w_n.to_std() - w) < 1e-13);
      CHECK(std::abs(s.rho_n.to_std() - l / o.g2p(w / l)) < 1e-12 * l);
      CHECK(s.rho_residual.to_double() < 1e-13);
      CHECK(s.orbit_residual.to_double() < 1e-13);
    }
    const AsymptoticFit fit = fit_ab(ne, k53);
    const ClaimReport claim = verify_claim_recurrence(ws, ne.lambda1(), fit.a, fit.b, Real(1e-3));
    CHECK(claim.holds);
    CHECK(claim.eps_decays);
    // the residuals decay like lambda1^-n
    for (std::size_t i = 1; i + 1 < claim.residuals.size(); ++i) {
      const double ratio = (claim.residuals[i + 1] / claim.residuals[i]).to_double();
      CHECK(ratio > 0.15);
      CHECK(ratio < 0.25);
    }
    // a wrong b is flagged
    const Complex wrong_b = fit.b + Complex(1e-2);
    CHECK_FALSE(verify_claim_recurrence(ws, ne.lambda1(), fit.a, wrong_b, Real(1e-3)).holds);
  }
  SUBCASE("second iterate against a direct fit of g2 o g2") {
    const AsymptoticFit fit = fit_ab(ne, k53);
    const auto si = second_iterate_check(ne, fit, 8, k53);
    const cd y = o.g2(0.0), alpha_hat = o.g2(y);
    const cd G1 = o.g2p(y) * o.g2p(0.0);
    const cd G2 = o.g2pp(y) * o.g2p(0.0) * o.g2p(0.0) + o.g2p(y) * o.g2pp(0.0);
    const cd a_hat = 1.0 / G1, b_hat = -alpha_hat * G2 / (G1 * G1);
    CHECK(std::abs(si.a_hat.to_std() - a_hat) < 1e-12);
    CHECK(std::abs(si.b_hat.to_std() - b_hat) < 1e-12);
    const cd b = fit.b.to_std();
    CHECK(std::abs(si.defect.to_double() - std::abs(b_hat - b * b)) < 1e-12);
  }
  SUBCASE("not affine") {
    const auto aff = affinity_test(ne, Real(1e-6), 16, k53);
    CHECK_FALSE(aff.affine_conjugate);
    CHECK(aff.sup_defect.to_double() > 1e-3);
  }
}

TEST_CASE("claim recurrence on synthetic sequences") {
  PrecisionScope scope(106);
  const Complex lambda(3L), a(2L), b(0.5);
  std::vector<WnSample> ws;
  for (int n = 1; n <= 12; ++n) {
    WnSample s;
    s.n = n;
    s.rho_n = a * pow(lambda, n - 1) + b;
    ws.push_back(s);
  }
  const ClaimReport ok = verify_claim_recurrence(ws, lambda, a, b, Real(1e-12));
  CHECK(ok.holds);
  CHECK(ok.overall_max.to_double() < 1e-12);
  CHECK(ok.trailing_start == 5);
  CHECK(ok.eps_decays);
  // a perturbation of 1e-3 in every rho_n past the first
  auto bad = ws;
  for (std::size_t i = 1; i < bad.size(); ++i) bad[i].rho_n += Complex(1e-3);
  CHECK_FALSE(verify_claim_recurrence(bad, lambda, a, b, Real(1e-12)).holds);
  CHECK_THROWS_AS(verify_claim_recurrence(std::vector<WnSample>(ws.begin(), ws.begin() + 3), lambda, a, b,
                                          Real(1e-12)),
                  InvalidArgument);
}

TEST_CASE("extraction on z^2") {
  const Extraction& ex = extraction("z^2");
  const auto& e = ex.eql;
  PrecisionScope scope(53);
  CHECK(e.n == 10);
  CHECK(ex.trace.z1_period == 1);
  CHECK(ex.trace.preimage_depth == 4);
  CHECK(ex.trace.m1 == 1);
  CHECK(ex.trace.m2 == 2);
  CHECK(dabs(e.z1 - Complex(1L)) < 1e-15);
  // every period-10 point of z^2 has multiplier 2^10
  CHECK(dabs(e.lambda1 - Complex(1024L)) < 1e-9);
  CHECK(dabs(e.lambda2 - Complex(1024L)) < 1e-9);
  CHECK(dabs(pow(e.z2, 1024) - e.z2) < 1e-9);
  CHECK(dabs(e.z2 - e.z1) > 0.1);
  for (const auto& inc : ex.trace.inclusions) CHECK_MESSAGE(inc.ok, inc.name);
  const auto inv = check_invariants(e, k53);
  CHECK(inv.ok);
  CHECK(inv.disjoint);
  CHECK(inv.repelling);
  CHECK(inv.right_inverse.to_double() < 1e-10);
  CHECK(trace_to_json(ex.trace)["n1"] == ex.trace.n1);
}

TEST_CASE("normalized z^2 extraction") {
  const NormalizedEql& ne = normalized("z^2");
  PrecisionScope scope(53);
  SUBCASE("the chart is log") {
    for (int k = 0; k < 8; ++k) {
      const Complex x = ne.v_point(0.7, k, 8);
      CHECK(std::abs(ne.phi(x).v.to_std() - std::log(x.to_std())) < 1e-12);
    }
    const auto nr = check_normalization(ne, 16, k53);
    CHECK(nr.linearity.to_double() < 1e-10);
    CHECK(nr.hausdorff.to_double() < 1e-12);
    CHECK(nr.z1_image.to_double() < 1e-15);
  }
  SUBCASE("w_n are period-10n points with multiplier 2^(10n)") {
    const auto ws = wn_sequence(ne, 6, k53);
    for (const auto& s : ws) {
      CHECK(s.exact_period);
      CHECK(s.rho_residual.to_double() < 1e-8);
      CHECK(s.orbit_residual.to_double() < 1e-8);
      const double l = std::pow(2.0, 10 * s.n);
      CHECK(std::abs(s.rho_n.to_std() - l) < 1e-10 * l);
    }
    // e^(w_1) is a period-10 point of z^2 (later n amplify double rounding by 2^(10n))
    const cd x = std::exp(ws[0].w_n.to_std());
    cd y = x;
    for (int j = 0; j < 10; ++j) y = y * y;
    CHECK(std::abs(y - x) < 1e-11);
    CHECK(wn_to_json(ws[0])["n"] == 1);
    CHECK_THROWS_AS(wn_sequence(ne, 1, k53), InvalidArgument);
  }
  SUBCASE("fit, ODE, second iterate and affinity") {
    const AsymptoticFit fit = fit_ab(ne, k53);
    CHECK(dabs(fit.b) < 1e-6);
    CHECK(dabs(fit.a - Complex(1024L)) < 1e-6);
    const auto ode = ode_residual(ne, fit, 16, k53);
    CHECK(ode.residual.to_double() < 1e-6);
    CHECK(ode.min_ratio.to_double() > 0.1);
    // corrupted fit: the residual grows with the error in b
    AsymptoticFit bad = fit;
    bad.b += Complex(1e-3);
    const auto bad_ode = ode_residual(ne, bad, 16, k53);
    CHECK(bad_ode.residual.to_double() > 0.5e-3 * ode.min_ratio.to_double());
    const auto si = second_iterate_check(ne, fit, 8, k53);
    CHECK(si.defect.to_double() < 1e-5);
    const auto aff = affinity_test(ne, Real(1e-6), 16, k53);
    CHECK(aff.affine_conjugate);
    CHECK(std::abs(aff.radius.to_double() - std::log(2.0)) < 1e-3);
    CHECK(affinity_to_json(aff)["affine_conjugate"] == true);
  }
}

TEST_CASE("z^2 - 2 and z^2 + 1 extractions") {
  SUBCASE("Chebyshev: ODE holds") {
    const NormalizedEql& ne = normalized("z^2-2");
    PrecisionScope scope(53);
    // z1 = -1 with multiplier -2; the critical orbit ends at the fixed point 2
    CHECK(dabs(ne.eql().z1 + Complex(1L)) < 1e-15);
    const AsymptoticFit fit = fit_ab(ne, k53);
    CHECK(ode_residual(ne, fit, 16, k53).residual.to_double() < 1e-6);
    for (const auto& s : wn_sequence(ne, 4, k53)) {
      // orbits of T2 off {-2, 2} have multipliers +-2^period
      const double l = std::pow(2.0, 15 * s.n);
      CHECK(std::abs(std::abs(s.rho_n.to_std()) - l) < 1e-9 * l);
    }
  }
  SUBCASE("z^2 + 1: not affine, ODE fails") {
    const NormalizedEql& ne = normalized("z^2+1");
    PrecisionScope scope(53);
    CHECK(check_invariants(ne.eql(), k53).ok);
    const AsymptoticFit fit = fit_ab(ne, k53);
    CHECK(ode_residual(ne, fit, 16, k53).residual.to_double() > 1);
    const auto aff = affinity_test(ne, Real(1e-6), 16, k53);
    CHECK_FALSE(aff.affine_conjugate);
    CHECK(aff.sup_defect.to_double() > 100 * 1e-6 * aff.radius.to_double());
    // the dual route still agrees
    for (const auto& s : wn_sequence(ne, 6, k53)) CHECK(s.rho_residual.to_double() < 1e-8);
  }
}

TEST_CASE("extraction errors") {
  PrecisionScope scope(53);
  CHECK_THROWS_AS(extract_eql(RationalMap(ExactPolynomial{1, 2}), {}, k53), InvalidArgument);
  ExtractOptions shallow;
  shallow.depth_max = 1;
  CHECK_THROWS_AS(extract_eql(power_map(2), shallow, k53), SearchExhausted);
  ExtractOptions bad;
  bad.boundary_samples = 4;
  CHECK_THROWS_AS(extract_eql(power_map(2), bad, k53), InvalidArgument);
}

TEST_CASE("EQL JSON round trip") {
  PrecisionScope scope(53);
  SUBCASE("iterate dynamics") {
    const auto& e = extraction("z^2").eql;
    const auto j = eql_to_json(e);
    const EscapingQuadraticLike back = eql_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.n == e.n);
    CHECK(dabs(back.z2 - e.z2) == 0);
    CHECK(eql_to_json(back) == j);
    CHECK(check_invariants(back, k53).ok);
  }
  SUBCASE("models") {
    const auto e = quadratic_model(Complex(5L), Complex(3L), Complex(4L), Complex(0.1), Real(4L), k53);
    const auto back = eql_from_json(eql_to_json(e));
    CHECK(dabs(back.dynamics->branch(2, Complex(1L)).v - e.dynamics->branch(2, Complex(1L)).v) == 0);
    const auto a = affine_model(Complex(3L), Complex(4L), Complex(8L), Real(3L), k53);
    CHECK(eql_to_json(eql_from_json(eql_to_json(a))) == eql_to_json(a));
  }
  SUBCASE("malformed") {
    CHECK_THROWS_AS(eql_from_json(nlohmann::json::object()), InvalidArgument);
    auto j = eql_to_json(affine_model(Complex(3L), Complex(4L), Complex(8L), Real(3L), k53));
    j["dynamics"]["kind"] = "spline";
    CHECK_THROWS_AS(eql_from_json(j), InvalidArgument);
    j["dynamics"]["kind"] = 3;
    CHECK_THROWS_AS(eql_from_json(j), InvalidArgument);
    CHECK_THROWS_AS(complex_from_json(nlohmann::json::array({1, 2})), InvalidArgument);
  }
}
