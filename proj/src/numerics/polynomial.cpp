#include "intmult/numerics/polynomial.hpp"

#include "intmult/errors.hpp"

namespace intmult {

ExactPolynomial::ExactPolynomial(std::vector<ExactScalar> coeffs) : coeffs_(std::move(coeffs)) {
  field();  // rejects mixed tags
  trim();
}

ExactPolynomial::ExactPolynomial(std::initializer_list<long> coeffs) {
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

ExactPolynomial ExactPolynomial::constant(ExactScalar c) { return ExactPolynomial({std::move(c)}); }

ExactPolynomial ExactPolynomial::monomial(ExactScalar c, int power) {
  std::vector<ExactScalar> v(static_cast<std::size_t>(power) + 1);
  v.back() = std::move(c);
  return ExactPolynomial(std::move(v));
}

void ExactPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

ExactScalar ExactPolynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return ExactScalar();
  return coeffs_[static_cast<std::size_t>(i)];
}

const ExactScalar& ExactPolynomial::leading() const {
  if (coeffs_.empty()) throw InvalidArgument("zero polynomial has no leading coefficient");
  return coeffs_.back();
}

std::optional<long> ExactPolynomial::field() const {
  std::optional<long> tag;
  for (const auto& c : coeffs_) {
    if (auto f = c.field()) {
      if (tag && *tag != *f) throw InvalidArgument("polynomial mixes coefficient fields");
      tag = f;
    }
  }
  return tag;
}

ExactPolynomial ExactPolynomial::derivative() const {
  std::vector<ExactScalar> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(ExactScalar(static_cast<long>(i)) * coeffs_[i]);
  return ExactPolynomial(std::move(d));
}

ExactPolynomial ExactPolynomial::monic() const {
  if (is_zero()) return *this;
  ExactScalar inv = ExactScalar(1L) / leading();
  return inv * *this;
}

ExactPolynomial ExactPolynomial::pow(int n) const {
  ExactPolynomial result = constant(ExactScalar(1L));
  ExactPolynomial base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

ExactScalar ExactPolynomial::evaluate(const ExactScalar& z) const {
  ExactScalar acc;
  for (int i = degree(); i >= 0; --i) acc = acc * z + coeffs_[i];
  return acc;
}

ExactPolynomial ExactPolynomial::reversed(int padded_degree) const {
  if (padded_degree < degree()) throw InvalidArgument("reversal degree below polynomial degree");
  std::vector<ExactScalar> r(static_cast<std::size_t>(padded_degree) + 1);
  for (int i = 0; i <= degree(); ++i) r[padded_degree - i] = coeffs_[i];
  return ExactPolynomial(std::move(r));
}

ComplexPolynomial ExactPolynomial::to_complex() const {
  std::vector<Complex> c;
  c.reserve(coeffs_.size());
  for (const auto& x : coeffs_) c.push_back(x.to_complex());
  return ComplexPolynomial(std::move(c));
}

ExactPolynomial ExactPolynomial::operator-() const {
  ExactPolynomial r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

ExactPolynomial operator+(const ExactPolynomial& a, const ExactPolynomial& b) {
  std::vector<ExactScalar> c(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1));
  for (int i = 0; i <= a.degree(); ++i) c[i] += a.coeffs_[i];
  for (int i = 0; i <= b.degree(); ++i) c[i] += b.coeffs_[i];
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator-(const ExactPolynomial& a, const ExactPolynomial& b) { return a + (-b); }

ExactPolynomial operator*(const ExactPolynomial& a, const ExactPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<ExactScalar> c(static_cast<std::size_t>(a.degree() + b.degree() + 1));
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (int j = 0; j <= b.degree(); ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return ExactPolynomial(std::move(c));
}

ExactPolynomial operator*(const ExactScalar& s, const ExactPolynomial& p) {
  std::vector<ExactScalar> c = p.coeffs_;
  for (auto& x : c) x *= s;
  return ExactPolynomial(std::move(c));
}

std::pair<ExactPolynomial, ExactPolynomial> divmod(const ExactPolynomial& a, const ExactPolynomial& b) {
  if (b.is_zero()) throw InvalidArgument("polynomial division by zero");
  if (a.degree() < b.degree()) return {ExactPolynomial(), a};
  std::vector<ExactScalar> rem = a.coefficients();
  std::vector<ExactScalar> quo(static_cast<std::size_t>(a.degree() - b.degree() + 1));
  const ExactScalar inv_lead = ExactScalar(1L) / b.leading();
  for (int i = a.degree(); i >= b.degree(); --i) {
    if (rem[i].is_zero()) continue;
    ExactScalar q = rem[i] * inv_lead;
    for (int j = 0; j <= b.degree(); ++j) rem[i - b.degree() + j] -= q * b.coefficients()[j];
    quo[i - b.degree()] = std::move(q);
  }
  rem.resize(static_cast<std::size_t>(b.degree()));
  return {ExactPolynomial(std::move(quo)), ExactPolynomial(std::move(rem))};
}

ExactPolynomial gcd(ExactPolynomial a, ExactPolynomial b) {
  while (!b.is_zero()) {
    ExactPolynomial r = divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

ComplexPolynomial::ComplexPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Complex ComplexPolynomial::evaluate(const Complex& z) const {
  Complex acc(Real(0L).rounded(z.precision()));
  for (int i = degree(); i >= 0; --i) acc = acc * z + coeffs_[i];
  return acc;
}

ComplexPolynomial ComplexPolynomial::derivative() const {
  std::vector<Complex> d;
  for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[i] * Real(static_cast<long>(i)));
  return ComplexPolynomial(std::move(d));
}

std::vector<Complex> poly_eval_derivs(const ComplexPolynomial& p, const Complex& z, int k) {
  if (k < 0) throw InvalidArgument("derivative order must be nonnegative");
  std::vector<Complex> d(static_cast<std::size_t>(k) + 1, Complex(Real(0L), Real(0L)));
  const int n = p.degree();
  for (int i = n; i >= 0; --i) {
    for (int j = std::min(k, n - i); j >= 1; --j) d[j] = d[j] * z + d[j - 1];
    d[0] = d[0] * z + p[i];
  }
  // d[j] holds the j-th Taylor coefficient; scale to derivatives.
  Real factorial(1L);
  for (int j = 2; j <= k; ++j) {
    factorial *= Real(static_cast<long>(j));
    d[j] = d[j] * factorial;
  }
  return d;
}

std::vector<Complex> poly_eval_derivs(const ComplexPolynomial& p, const Complex& z, int k,
                                      const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  return poly_eval_derivs(p, z.rounded(ctx.mantissa_bits), k);
}

std::vector<Complex> poly_eval_derivs(const ExactPolynomial& p, const Complex& z, int k,
                                      const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  return poly_eval_derivs(p.to_complex(), z.rounded(ctx.mantissa_bits), k);
}

}  // namespace intmult
