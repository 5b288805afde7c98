#include <algorithm>
#include <random>

#include "doctest.h"
#include "intmult/errors.hpp"
#include "intmult/maps/maps.hpp"
#include "intmult/numerics/roots.hpp"
#include "intmult/periodic/periodic.hpp"

using namespace intmult;

namespace {

const PrecisionContext k53 = PrecisionContext::with_bits(53);
const PrecisionContext k106 = PrecisionContext::with_bits(106);

std::vector<std::complex<double>> multipliers(const std::vector<PeriodicOrbit>& orbits) {
  std::vector<std::complex<double>> out;
  for (const auto& o : orbits) {
    for (int k = 0; k < o.multiplicity; ++k) out.push_back(o.multiplier.to_std());
  }
  return out;
}

// Greedy multiset match within tol.
bool same_multiset(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](auto u, auto v) { return std::abs(u - x) < std::abs(v - x); });
    if (std::abs(*it - x) > tol * std::max(1.0, std::abs(x))) return false;
    b.erase(it);
  }
  return true;
}

bool contains(const std::vector<std::complex<double>>& v, std::complex<double> x, double tol) {
  return std::any_of(v.begin(), v.end(), [&](auto y) { return std::abs(y - x) < tol; });
}

// Independent route: roots of the expanded period polynomial and the derivative
// of the expanded iterate, both at 200 bits. Finite points only.
std::vector<std::complex<double>> expanded_fixed_multipliers(const RationalMap& f, int p) {
  PrecisionScope scope(200);
  const RationalMap fp = compose_iterate(f, p);
  RationalEvaluator ev(fp);
  std::vector<std::complex<double>> out;
  for (const auto& r : find_roots(fp.fixed_point_polynomial(), PrecisionContext::with_bits(200))) {
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(ev.jet(r.value).d1.to_std());
  }
  return out;
}

}  // namespace

TEST_CASE("period_p_points on z^2") {
  const RationalMap f = power_map(2);
  SUBCASE("fixed points 0, 1, infinity") {
    auto orbits = period_p_points(f, 1, k53);
    REQUIRE(orbits.size() == 3);
    int finite_zero = 0, one = 0, inf = 0;
    for (const auto& o : orbits) {
      const auto& pt = o.points[0];
      if (pt.infinite) {
        ++inf;
        CHECK(o.multiplier.is_zero());
      } else if (abs(pt.z).to_double() < 1e-15) {
        ++finite_zero;
        CHECK(abs(o.multiplier).to_double() < 1e-15);
      } else {
        ++one;
        CHECK(abs(pt.z - Complex(1L)).to_double() < 1e-15);
        CHECK(abs(o.multiplier - Complex(2L)).to_double() < 1e-14);
      }
    }
    CHECK(finite_zero == 1);
    CHECK(one == 1);
    CHECK(inf == 1);
  }
  SUBCASE("period 2 is the pair of primitive cube roots of unity") {
    auto orbits = period_p_points(f, 2, k53);
    REQUIRE(orbits.size() == 1);
    const auto& o = orbits[0];
    REQUIRE(o.points.size() == 2);
    for (const auto& pt : o.points) {
      // z^2 + z + 1 = 0
      CHECK(abs(pt.z * pt.z + pt.z + Complex(1L)).to_double() < 1e-14);
    }
    CHECK(abs(o.multiplier - Complex(4L)).to_double() < 1e-13);
  }
}

TEST_CASE("period_p_points on z^2 - 2") {
  const RationalMap f = chebyshev(2);
  auto p1 = multipliers(period_p_points(f, 1, k53));
  CHECK(same_multiset(p1, {4.0, -2.0, 0.0}, 1e-12));
  auto orbits = period_p_points(f, 2, k53);
  REQUIRE(orbits.size() == 1);
  for (const auto& pt : orbits[0].points) {
    // z^2 + z - 1 = 0 from (f^2(z) - z) / (f(z) - z)
    CHECK(abs(pt.z * pt.z + pt.z - Complex(1L)).to_double() < 1e-14);
  }
  CHECK(abs(orbits[0].multiplier - Complex(-4L)).to_double() < 1e-12);
}

TEST_CASE("orbits through infinity") {
  // 1/z^3: 0 <-> infinity, fourth roots of unity fixed with multiplier -3,
  // two 2-cycles on z^4 = -1 with multiplier 9
  const RationalMap f = power_map(3, -1);
  auto p1 = multipliers(period_p_points(f, 1, k53));
  CHECK(same_multiset(p1, {-3.0, -3.0, -3.0, -3.0}, 1e-12));
  auto orbits = period_p_points(f, 2, k53);
  REQUIRE(orbits.size() == 3);
  CHECK(same_multiset(multipliers(orbits), {0.0, 9.0, 9.0}, 1e-12));
  bool saw_infinity = false;
  for (const auto& o : orbits) {
    for (const auto& pt : o.points) saw_infinity = saw_infinity || pt.infinite;
  }
  CHECK(saw_infinity);
}

TEST_CASE("orbit_multiplier") {
  const RationalMap sq = power_map(2);
  CHECK(abs(orbit_multiplier(sq, SpherePoint{Complex(1L)}, 1, k53).value - Complex(2L)).to_double() < 1e-15);
  const Complex w = Complex::polar(Real(1L), ldexp(Real::pi(), 1) / Real(3L));
  CHECK(abs(orbit_multiplier(sq, SpherePoint{w}, 2, k53).value - Complex(4L)).to_double() < 1e-13);
  CHECK(abs(orbit_multiplier(chebyshev(2), SpherePoint{Complex(-1L)}, 1, k53).value - Complex(-2L)).to_double() <
        1e-15);
  CHECK(orbit_multiplier(sq, SpherePoint::at_infinity(), 1, k53).value.is_zero());

  const auto ent = EntireEvaluator::polynomial(ExactPolynomial{0, 2, 1});
  CHECK(abs(orbit_multiplier(ent, Complex(0L), 1, k53).value - Complex(2L)).to_double() < 1e-15);
  CHECK_THROWS_AS(orbit_multiplier(EntireEvaluator::scaled_exp(1.0), Complex(30.0), 3, k53), OrbitError);

  SUBCASE("chain rule against the expanded iterate") {
    const std::vector<RationalMap> maps{chebyshev(3), lattes_doubling({0, 1}),
                                        RationalMap(ExactPolynomial{1, 0, 1}, ExactPolynomial{0, 3})};
    for (const auto& f : maps) {
      for (int p = 1; p <= 2; ++p) {
        RationalEvaluator fp(compose_iterate(f, p));
        for (const auto& o : period_p_points(f, p, k106)) {
          if (o.points[0].infinite || abs(o.points[0].z) > Real(1e6)) continue;
          PrecisionScope scope(106);
          const Complex direct = fp.jet(o.points[0].z).d1;
          CHECK(abs(direct - o.multiplier).to_double() <= 1e-20 + 10 * o.multiplier_residual.to_double());
        }
      }
    }
  }
}

TEST_CASE("sphere point counts") {
  const std::vector<std::pair<RationalMap, int>> cases{
      {power_map(2), 4},  {power_map(3), 3},           {chebyshev(2), 4},         {chebyshev(3, -1), 3},
      {power_map(2, -1), 4}, {lattes_doubling({0, 1}), 2}, {lattes_doubling({1, 0}), 2},
      {RationalMap(ExactPolynomial{1, 0, 1}, ExactPolynomial{0, 1}), 4},
      {RationalMap(ExactPolynomial(std::vector<ExactScalar>{mpq_class(1, 3), 1L, 0L, 1L})), 3}};
  for (const auto& [f, pmax] : cases) {
    const auto s = multiplier_spectrum(f, pmax, k53);
    long total = 1;
    for (int p = 1; p <= pmax; ++p) {
      total *= f.degree();
      CHECK(sphere_point_count(s, p) == total + 1);
    }
    CHECK(s.flagged_periods.empty());
  }
}

TEST_CASE("power-map law") {
  for (int d = 2; d <= 3; ++d) {
    const auto s = multiplier_spectrum(power_map(d), d == 2 ? 4 : 3, k53);
    for (const auto& [p, orbits] : s.by_period) {
      double dp = std::pow(d, p);
      for (const auto& o : orbits) {
        const double m = abs(o.multiplier).to_double();
        if (m < 1e-12) continue;
        CHECK(abs(o.multiplier - Complex(dp)).to_double() < 1e-10 * dp);
      }
    }
  }
}

TEST_CASE("Lattes spectra are rational integers") {
  for (const EllipticCurveData E : {EllipticCurveData{0, 1}, EllipticCurveData{1, 0}}) {
    const RationalMap f = lattes_doubling(E);
    const auto s = multiplier_spectrum(f, 2, k106);
    for (const auto& [p, orbits] : s.by_period) {
      for (const auto& o : orbits) {
        const auto z = o.multiplier.to_std();
        CHECK(std::abs(z - std::round(z.real())) < 1e-8);
      }
      // the finite part agrees with the expanded-iterate oracle
      std::vector<std::complex<double>> finite;
      for (const auto& o : orbits) {
        bool inf = false;
        for (const auto& pt : o.points) inf = inf || pt.infinite;
        if (!inf) {
          for (int k = 0; k < o.multiplicity * o.period; ++k) finite.push_back(o.multiplier.to_std());
        }
      }
      auto oracle = expanded_fixed_multipliers(f, p);
      // the oracle also holds the lower-period points; keep the exact-period ones
      std::vector<std::complex<double>> lower;
      for (int q = 1; q < p; ++q) {
        if (p % q) continue;
        for (const auto& o : s.by_period.at(q)) {
          bool inf = false;
          for (const auto& pt : o.points) inf = inf || pt.infinite;
          if (inf) continue;
          std::complex<double> lam = std::pow(o.multiplier.to_std(), p / q);
          for (int k = 0; k < o.multiplicity * q; ++k) lower.push_back(lam);
        }
      }
      finite.insert(finite.end(), lower.begin(), lower.end());
      CHECK(same_multiset(finite, oracle, 1e-8));
    }
  }
}

TEST_CASE("conjugation invariance") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<long> c(-4, 4);
  const RationalMap f = chebyshev(2);
  const auto base = multiplier_spectrum(f, 3, k53);
  int tested = 0;
  while (tested < 3) {
    Mobius M{c(rng), c(rng), c(rng), c(rng)};
    if (M.determinant().is_zero()) continue;
    ++tested;
    const auto s = multiplier_spectrum(mobius_conjugate(f, M), 3, k53);
    for (int p = 1; p <= 3; ++p) {
      CHECK(same_multiset(multipliers(s.by_period.at(p)), multipliers(base.by_period.at(p)), 1e-8));
    }
  }
}

TEST_CASE("precision doubling moves multipliers by less than their residual") {
  const std::vector<RationalMap> maps{chebyshev(3), RationalMap(ExactPolynomial{1, 0, 1}),
                                      lattes_doubling({1, 0})};
  for (const auto& f : maps) {
    for (int p = 1; p <= 2; ++p) {
      const auto lo = period_p_points(f, p, k53);
      const auto hi = period_p_points(f, p, k106);
      REQUIRE(lo.size() == hi.size());
      for (const auto& o : lo) {
        Real best = Real::infinity();
        for (const auto& h : hi) best = min(best, abs(h.multiplier - o.multiplier));
        CHECK(best <= o.multiplier_residual);
      }
    }
  }
}

TEST_CASE("canonical order and determinism") {
  const auto a = period_p_points(RationalMap(ExactPolynomial{1, 0, 1}), 3, k53);
  const auto b = period_p_points(RationalMap(ExactPolynomial{1, 0, 1}), 3, k53);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].multiplier == b[i].multiplier);
    CHECK(a[i].points[0].z == b[i].points[0].z);
    if (i > 0) CHECK(abs(a[i - 1].multiplier) <= abs(a[i].multiplier) + Real(1e-9));
  }
  CHECK_THROWS_AS(period_p_points(power_map(4), 7, k53), ResourceLimit);
}

TEST_CASE("transcendental search") {
  const PrecisionContext ctx = k53;
  SUBCASE("2z + z^2") {
    auto orbits = transcendental_periodic_search(EntireEvaluator::polynomial(ExactPolynomial{0, 2, 1}), 1, Box{}, 8, ctx);
    REQUIRE(orbits.size() == 2);
    CHECK(abs(orbits[0].points[0].z - Complex(-1L)).to_double() < 1e-14);
    CHECK(abs(orbits[0].multiplier).to_double() < 1e-14);
    CHECK(abs(orbits[1].points[0].z).to_double() < 1e-14);
    CHECK(abs(orbits[1].multiplier - Complex(2L)).to_double() < 1e-14);
  }
  SUBCASE("2 sin z") {
    // 1-d Newton on 2 sin x - x for the positive fixed point
    double x = 2.0;
    for (int i = 0; i < 50; ++i) x -= (2 * std::sin(x) - x) / (2 * std::cos(x) - 1);
    auto orbits = transcendental_periodic_search(EntireEvaluator::scaled_sin(2.0), 1, Box{}, 12, ctx);
    std::vector<std::complex<double>> pts, lams;
    for (const auto& o : orbits) {
      pts.push_back(o.points[0].z.to_std());
      lams.push_back(o.multiplier.to_std());
    }
    CHECK(contains(pts, 0.0, 1e-12));
    CHECK(contains(pts, x, 1e-12));
    CHECK(contains(pts, -x, 1e-12));
    CHECK(contains(lams, 2.0, 1e-12));
    CHECK(contains(lams, 2 * std::cos(x), 1e-12));
  }
  SUBCASE("z^2 period 2 matches the rational path") {
    auto orbits = transcendental_periodic_search(EntireEvaluator::polynomial(ExactPolynomial{0, 0, 1}), 2, Box{}, 10, ctx);
    auto rational = period_p_points(power_map(2), 2, ctx);
    REQUIRE(orbits.size() == 1);
    CHECK(abs(orbits[0].multiplier - rational[0].multiplier).to_double() < 1e-12);
    CHECK(abs(orbits[0].points[0].z - rational[0].points[0].z).to_double() < 1e-12);
  }
}

TEST_CASE("spectrum CSV") {
  const auto csv = spectrum_to_csv(multiplier_spectrum(power_map(2), 2, k53));
  CHECK(csv.rfind("period,orbit_index,re_lambda,im_lambda,residual,multiplicity\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
