#pragma once

#include <optional>

#include "intmult/numerics/polynomial.hpp"

namespace intmult {

inline constexpr long kDefaultIterateDegreeCap = 10000;

// Rational map num/den with exact coefficients in Q or Q(sqrt(-d)).
//
// Canonical form: num and den coprime, den monic. Two maps are equal iff
// their canonical forms agree coefficient by coefficient.
class RationalMap {
 public:
  // Cancels the exact gcd and normalizes. Throws InvalidArgument for a zero
  // denominator or a map of degree < 1.
  RationalMap(ExactPolynomial num, ExactPolynomial den);
  explicit RationalMap(ExactPolynomial poly) : RationalMap(std::move(poly), ExactPolynomial{1}) {}

  // Skips the gcd; the caller guarantees coprimality (e.g. compositions of
  // coprime maps).
  static RationalMap from_coprime(ExactPolynomial num, ExactPolynomial den);

  const ExactPolynomial& num() const noexcept { return num_; }
  const ExactPolynomial& den() const noexcept { return den_; }
  int degree() const noexcept { return std::max(num_.degree(), den_.degree()); }
  bool is_polynomial() const noexcept { return den_.degree() == 0; }
  // Infinity is fixed iff deg num > deg den.
  bool fixes_infinity() const noexcept { return num_.degree() > den_.degree(); }
  std::optional<long> field() const;

  // Numerator of f(z) - z, i.e. num - z*den.
  ExactPolynomial fixed_point_polynomial() const;

  friend bool operator==(const RationalMap& a, const RationalMap& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Trusted {};
  RationalMap(Trusted, ExactPolynomial num, ExactPolynomial den);
  void normalize();

  ExactPolynomial num_;
  ExactPolynomial den_;
};

// f o g, computed homogeneously so no gcd is needed.
RationalMap compose(const RationalMap& f, const RationalMap& g);

// The pair (A_p, B_p) with (A_1, B_1) = (num, den) and
// A_{k+1} = sum num_i A_k^i B_k^(d-i), B_{k+1} likewise, before any rescaling.
// Float iteration of the same recurrence from (z, 1) reproduces these
// polynomials, which is how period equations are evaluated stably.
std::pair<ExactPolynomial, ExactPolynomial> homogeneous_iterate(const RationalMap& f, int p,
                                                                long degree_cap = kDefaultIterateDegreeCap);

// f^p. Throws ResourceLimit when degree(f)^p exceeds `degree_cap`.
RationalMap compose_iterate(const RationalMap& f, int p, long degree_cap = kDefaultIterateDegreeCap);

}  // namespace intmult
