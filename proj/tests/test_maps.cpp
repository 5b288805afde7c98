#include <random>

#include "doctest.h"
#include "intmult/errors.hpp"
#include "intmult/io/map_json.hpp"
#include "intmult/maps/maps.hpp"
#include "intmult/numerics/roots.hpp"

using namespace intmult;

namespace {

ExactPolynomial z_pow(int k) { return ExactPolynomial::monomial(ExactScalar(1L), k); }

// Exact square root of a nonnegative rational, if it is a square.
std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return mpq_class(rn, rd);
}

// Exact rational evaluation of p/q; nullopt at a pole.
std::optional<mpq_class> eval_exact(const RationalMap& f, const mpq_class& x) {
  ExactScalar den = f.den().evaluate(ExactScalar(x));
  if (den.is_zero()) return std::nullopt;
  return (f.num().evaluate(ExactScalar(x)) / den).rational_part();
}

// Multipliers of the finite fixed points, sorted by real part.
std::vector<double> fixed_point_multipliers(const RationalMap& f) {
  PrecisionScope scope(106);
  RationalEvaluator ev(f);
  std::vector<double> out;
  for (const auto& r : find_roots(f.fixed_point_polynomial(), PrecisionContext::with_bits(106))) {
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(ev.jet(r.value).d1.re().to_double());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("power maps") {
  CHECK(power_map(2) == RationalMap(z_pow(2)));
  CHECK(power_map(3, -1) == RationalMap(ExactPolynomial{1}, z_pow(3)));
  CHECK(power_map(4).degree() == 4);
  CHECK(power_map(4).is_polynomial());
  CHECK_FALSE(power_map(3, -1).is_polynomial());
  CHECK_THROWS_AS(power_map(1), InvalidArgument);
}

TEST_CASE("chebyshev polynomials") {
  CHECK(chebyshev(2) == RationalMap(ExactPolynomial{-2, 0, 1}));
  CHECK(chebyshev(3) == RationalMap(ExactPolynomial{0, -3, 0, 1}));
  CHECK(chebyshev(3, -1) == RationalMap(ExactPolynomial{0, 3, 0, -1}));

  SUBCASE("T3(2 + 1/2) = 2^3 + 2^-3") {
    const ExactScalar v = chebyshev(3).num().evaluate(ExactScalar(mpq_class(5, 2)));
    CHECK(v == ExactScalar(mpq_class(65, 8)));  // 8.125
  }
  SUBCASE("monic with integer coefficients up to d = 20") {
    for (int d = 2; d <= 20; ++d) {
      const RationalMap T = chebyshev(d);
      CHECK(T.num().degree() == d);
      CHECK(T.num().leading() == ExactScalar(1L));
      for (const auto& c : T.num().coefficients()) CHECK(c.rational_part().get_den() == 1);
    }
  }
  SUBCASE("semiconjugacy to z^d through z + 1/z") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> mod(0.5, 2.0), ang(0.0, 6.283185307179586);
    for (int d = 2; d <= 4; ++d) {
      const ComplexPolynomial T = chebyshev(d).num().to_complex();
      for (int t = 0; t < 100; ++t) {
        const Complex u = Complex::polar(Real(mod(rng)), Real(ang(rng)));
        const Complex lhs = T.evaluate(u + reciprocal(u));
        const Complex rhs = pow(u, d) + pow(reciprocal(u), d);
        CHECK(abs(lhs - rhs).to_double() < 1e-10);
      }
    }
  }
}

TEST_CASE("Lattes doubling maps") {
  SUBCASE("closed forms") {
    CHECK(lattes_doubling({0, 1}) == RationalMap(ExactPolynomial{0, -8, 0, 0, 1}, ExactPolynomial{4, 0, 0, 4}));
    CHECK(lattes_doubling({1, 0}) == RationalMap(ExactPolynomial{1, 0, -2, 0, 1}, ExactPolynomial{0, 4, 0, 4}));
    CHECK(lattes_doubling({0, 1}).degree() == 4);
    CHECK(lattes_doubling({1, 0}).degree() == 4);
  }
  SUBCASE("singular curve rejected") {
    CHECK_THROWS_AS(lattes_doubling({-3, 2}), InvalidArgument);  // 4(-27) + 27*4 = 0
    CHECK_THROWS_AS(lattes_doubling({0, 0}), InvalidArgument);
  }
  SUBCASE("tangent-line doubling of (2, 3) on y^2 = x^3 + 1") {
    // slope (3x^2 + a) / 2y = 2, x(2P) = slope^2 - 2x = 0
    CHECK(eval_exact(lattes_doubling({0, 1}), 2) == mpq_class(0));
  }
  SUBCASE("group law on all small rational points") {
    const std::vector<EllipticCurveData> curves{{0, 1}, {1, 0}, {0, -2}, {-1, 1}, {-2, 5}, {0, 17}};
    int checked = 0;
    for (const auto& E : curves) {
      const RationalMap f = lattes_doubling(E);
      for (long m = 1; m <= 3; ++m) {
        for (long n = -20 * m * m; n <= 20 * m * m; ++n) {
          const mpq_class x(n, m * m);
          mpq_class xc = x;
          xc.canonicalize();
          if (xc.get_den() != m * m) continue;  // each x once
          const mpq_class rhs = xc * xc * xc + E.a * xc + E.b;
          auto y = rational_sqrt(rhs);
          if (!y || abs(*y) > 20) continue;
          ++checked;
          auto fx = eval_exact(f, xc);
          if (*y == 0) {
            CHECK_FALSE(fx.has_value());  // 2-torsion doubles to the point at infinity
            continue;
          }
          const mpq_class slope = (3 * xc * xc + E.a) / (2 * *y);
          REQUIRE(fx.has_value());
          CHECK(*fx == slope * slope - 2 * xc);
        }
      }
    }
    CHECK(checked >= 10);
  }
}

TEST_CASE("Mobius conjugation") {
  const RationalMap sq = power_map(2);
  SUBCASE("translation") {
    CHECK(mobius_conjugate(sq, Mobius{1, 1, 0, 1}) == RationalMap(ExactPolynomial{2, -2, 1}));
  }
  SUBCASE("identity leaves the map unchanged") {
    const RationalMap f(ExactPolynomial{1, 0, 3}, ExactPolynomial{-2, 5});
    CHECK(mobius_conjugate(f, Mobius{}) == f);
  }
  SUBCASE("degenerate transformation") {
    CHECK_THROWS_AS(mobius_conjugate(sq, Mobius{1, 2, 2, 4}), InvalidArgument);
  }
  SUBCASE("conjugating back by the inverse") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> c(-5, 5);
    const std::vector<RationalMap> maps{chebyshev(2), lattes_doubling({0, 1}),
                                        RationalMap(ExactPolynomial{1, 0, 1}, z_pow(1))};
    for (const auto& f : maps) {
      for (int t = 0; t < 5; ++t) {
        Mobius M{c(rng), c(rng), c(rng), c(rng)};
        if (M.determinant().is_zero()) continue;
        const RationalMap g = mobius_conjugate(f, M);
        CHECK(g.degree() == f.degree());
        CHECK(mobius_conjugate(g, M.inverse()) == f);
      }
    }
  }
  SUBCASE("over Q(sqrt(-2))") {
    Mobius M{ExactScalar::sqrt_minus(2), 1, 0, 1};
    const RationalMap g = mobius_conjugate(sq, M);
    CHECK(g.field() == 2);
    CHECK(mobius_conjugate(g, M.inverse()) == sq);
  }
  SUBCASE("fixed-point multipliers survive scaling by 1/2") {
    const RationalMap f = chebyshev(2);
    const RationalMap g = mobius_conjugate(f, Mobius{ExactScalar(mpq_class(1, 2)), 0, 0, 1});
    CHECK(g == RationalMap(ExactPolynomial{-1, 0, 2}));  // 2z^2 - 1
    auto lf = fixed_point_multipliers(f);
    auto lg = fixed_point_multipliers(g);
    REQUIRE(lf.size() == 2);
    REQUIRE(lg.size() == 2);
    CHECK(lf[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(lf[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(lg[0] == doctest::Approx(lf[0]).epsilon(1e-12));
    CHECK(lg[1] == doctest::Approx(lf[1]).epsilon(1e-12));
  }
}

TEST_CASE("rational evaluator jets") {
  PrecisionScope scope(120);
  const RationalMap f = lattes_doubling({1, 0});
  RationalEvaluator ev(f);
  const Complex z(0.7, -0.4);
  const Real h = exp2i(-30);
  const Jet2 j = ev.jet(z);
  const Complex fd1 = (ev(z + Complex(h)) - ev(z - Complex(h))) / Complex(ldexp(h, 1));
  const Complex fd2 = (ev(z + Complex(h)) - Complex(2L) * j.v + ev(z - Complex(h))) / Complex(h * h);
  CHECK(abs(fd1 - j.d1).to_double() < 1e-12);
  CHECK(abs(fd2 - j.d2).to_double() < 1e-6);
  CHECK_FALSE(ev.jet(Complex(0L)).v.is_finite());  // pole
}

TEST_CASE("entire evaluators") {
  CHECK_NOTHROW(EntireEvaluator::scaled_sin(2.0));
  CHECK_NOTHROW(EntireEvaluator::scaled_exp(0.5));
  CHECK_NOTHROW(EntireEvaluator::polynomial(ExactPolynomial{0, 2, 1}));
  auto wrong = [](const Complex& z) { return Jet2{z * z, z, Complex(2L)}; };
  CHECK_THROWS_AS(EntireEvaluator(wrong, "bad", true), VerificationFailure);
  const EntireEvaluator s = EntireEvaluator::scaled_sin(2.0);
  CHECK(abs(s(Complex(0.5)) - Complex(2.0 * std::sin(0.5))).to_double() < 1e-15);
}

TEST_CASE("map JSON round trip") {
  const std::vector<RationalMap> maps{power_map(3, -1), chebyshev(4, -1), lattes_doubling({mpq_class(1, 3), 2}),
                                      mobius_conjugate(power_map(2), Mobius{ExactScalar::sqrt_minus(7), 1, 0, 1})};
  for (const auto& f : maps) CHECK(map_from_json(nlohmann::json::parse(map_to_json(f).dump())) == f);

  const auto j = map_to_json(chebyshev(2));
  CHECK(j["field_d"].is_null());
  CHECK(j["num"][0] == nlohmann::json::array({"-2", "1", "0", "1"}));

  CHECK_THROWS_AS(map_from_json(nlohmann::json::parse(R"({"num": [["1","0","0","1"]], "den": [["1","1","0","1"]]})")),
                  InvalidArgument);
  CHECK_THROWS_AS(map_from_json(nlohmann::json::parse(R"({"field_d": 4, "num": [], "den": []})")), InvalidArgument);
  CHECK_THROWS_AS(map_from_json(nlohmann::json::parse(R"({"num": [["x","1","0","1"]], "den": []})")),
                  InvalidArgument);
}
