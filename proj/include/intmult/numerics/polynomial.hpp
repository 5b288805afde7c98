#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "intmult/numerics/complex.hpp"
#include "intmult/numerics/exact.hpp"
#include "intmult/numerics/precision.hpp"

namespace intmult {

class ComplexPolynomial;

// Univariate polynomial with exact coefficients, constant term first. The
// zero polynomial has an empty coefficient sequence and degree -1.
class ExactPolynomial {
 public:
  ExactPolynomial() = default;
  explicit ExactPolynomial(std::vector<ExactScalar> coeffs);
  ExactPolynomial(std::initializer_list<long> coeffs);

  static ExactPolynomial constant(ExactScalar c);
  static ExactPolynomial monomial(ExactScalar c, int power);
  static ExactPolynomial identity() { return monomial(ExactScalar(1L), 1); }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<ExactScalar>& coefficients() const noexcept { return coeffs_; }
  // Coefficient of z^i, zero outside the stored range.
  ExactScalar coeff(int i) const;
  const ExactScalar& leading() const;
  std::optional<long> field() const;

  ExactPolynomial derivative() const;
  ExactPolynomial monic() const;
  ExactPolynomial pow(int n) const;
  ExactScalar evaluate(const ExactScalar& z) const;
  // Coefficients of z^padded_degree * p(1/z).
  ExactPolynomial reversed(int padded_degree) const;
  ComplexPolynomial to_complex() const;  // at the working precision

  ExactPolynomial operator-() const;
  friend ExactPolynomial operator+(const ExactPolynomial& a, const ExactPolynomial& b);
  friend ExactPolynomial operator-(const ExactPolynomial& a, const ExactPolynomial& b);
  friend ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b);
  friend ExactPolynomial operator*(const ExactScalar& s, const ExactPolynomial& p);
  friend bool operator==(const ExactPolynomial& a, const ExactPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  void trim();
  std::vector<ExactScalar> coeffs_;
};

// Quotient and remainder of a / b; b must be nonzero.
std::pair<ExactPolynomial, ExactPolynomial> divmod(const ExactPolynomial& a, const ExactPolynomial& b);
// Monic greatest common divisor (zero when both inputs are zero).
ExactPolynomial gcd(ExactPolynomial a, ExactPolynomial b);

// Polynomial with complex floating coefficients, constant term first.
class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<Complex> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coefficients() const noexcept { return coeffs_; }
  const Complex& operator[](int i) const { return coeffs_[static_cast<std::size_t>(i)]; }
  const Complex& leading() const { return coeffs_.back(); }

  Complex evaluate(const Complex& z) const;
  ComplexPolynomial derivative() const;

 private:
  std::vector<Complex> coeffs_;
};

// p(z), p'(z), ..., p^(k)(z) by one synthetic-division pass. Entries past the
// degree are zero.
std::vector<Complex> poly_eval_derivs(const ComplexPolynomial& p, const Complex& z, int k);
std::vector<Complex> poly_eval_derivs(const ComplexPolynomial& p, const Complex& z, int k,
                                      const PrecisionContext& ctx);
std::vector<Complex> poly_eval_derivs(const ExactPolynomial& p, const Complex& z, int k,
                                      const PrecisionContext& ctx);

}  // namespace intmult
