#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "intmult/numerics/rational_map.hpp"

namespace intmult {

// Value with first and second derivative.
struct Jet2 {
  Complex v;
  Complex d1;
  Complex d2;
};

// z^(sign*d).
RationalMap power_map(int d, int sign = 1);

// sign * T_d with T_d(z + 1/z) = z^d + z^-d.
RationalMap chebyshev(int d, int sign = 1);

// y^2 = x^3 + a x + b.
struct EllipticCurveData {
  mpq_class a;
  mpq_class b;

  bool nonsingular() const { return 4 * a * a * a + 27 * b * b != 0; }
};

// x-coordinate of multiplication by 2 on the curve. Throws InvalidArgument on
// a singular curve.
RationalMap lattes_doubling(const EllipticCurveData& curve);

// z -> (a z + b) / (c z + d).
struct Mobius {
  ExactScalar a{1L}, b{0L}, c{0L}, d{1L};

  ExactScalar determinant() const { return a * d - b * c; }
  Mobius inverse() const { return Mobius{d, -b, -c, a}; }
  RationalMap as_map() const;
};

// M o f o M^-1. Throws InvalidArgument when ad - bc = 0.
RationalMap mobius_conjugate(const RationalMap& f, const Mobius& M);

// Evaluates a map and its first two derivatives at finite points.
class MapEvaluator {
 public:
  virtual ~MapEvaluator() = default;
  virtual Jet2 jet(const Complex& z) const = 0;
  Complex operator()(const Complex& z) const { return jet(z).v; }
  virtual const std::string& description() const = 0;
  virtual bool is_rational() const { return false; }
  // Taylor coefficients f(z + t) = sum c_k t^k for k <= order. The default
  // only knows the jet, so it stops at order 2.
  virtual std::vector<Complex> taylor(const Complex& z, int order) const;
};

// Rational map evaluated at the working precision of each call. Poles give
// non-finite values.
class RationalEvaluator : public MapEvaluator {
 public:
  explicit RationalEvaluator(RationalMap f);
  Jet2 jet(const Complex& z) const override;
  const std::string& description() const override { return description_; }
  bool is_rational() const override { return true; }
  std::vector<Complex> taylor(const Complex& z, int order) const override;
  const RationalMap& map() const noexcept { return f_; }

 private:
  struct Cache;
  struct FloatPolys {
    const ComplexPolynomial& num;
    const ComplexPolynomial& den;
  };
  FloatPolys polys() const;
  RationalMap f_;
  std::string description_;
  std::shared_ptr<Cache> cache_;  // float coefficients per precision
};

// Black-box entire map. Construction checks both derivative evaluators
// against central differences at 10 seeded points of the unit disk.
class EntireEvaluator : public MapEvaluator {
 public:
  using Fn = std::function<Jet2(const Complex&)>;

  // Throws VerificationFailure when a derivative disagrees with its
  // finite-difference estimate by more than relative 1e-6.
  EntireEvaluator(Fn fn, std::string description, bool is_polynomial);

  Jet2 jet(const Complex& z) const override { return fn_(z); }
  const std::string& description() const override { return description_; }
  bool is_polynomial() const noexcept { return is_polynomial_; }

  static EntireEvaluator polynomial(const ExactPolynomial& p);
  // c * sin(z)
  static EntireEvaluator scaled_sin(double c);
  // c * exp(z)
  static EntireEvaluator scaled_exp(double c);

 private:
  Fn fn_;
  std::string description_;
  bool is_polynomial_;
};

std::string describe(const ExactPolynomial& p);
std::string describe(const RationalMap& f);

}  // namespace intmult
