#include "intmult/numerics/complex.hpp"

namespace intmult {

Complex Complex::i() { return {Real(0L), Real(1L)}; }

Complex Complex::polar(const Real& r, const Real& theta) {
  return {r * cos(theta), r * sin(theta)};
}

Complex& Complex::operator+=(const Complex& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  *this = *this * o;
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  *this = *this / o;
  return *this;
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re() + b.re(), a.im() + b.im()}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re() - b.re(), a.im() - b.im()}; }

Complex operator*(const Complex& a, const Complex& b) {
  return {a.re() * b.re() - a.im() * b.im(), a.re() * b.im() + a.im() * b.re()};
}

Complex operator/(const Complex& a, const Complex& b) {
  // MPFR's exponent range makes the textbook formula safe from overflow.
  Real den = b.re() * b.re() + b.im() * b.im();
  return {(a.re() * b.re() + a.im() * b.im()) / den, (a.im() * b.re() - a.re() * b.im()) / den};
}

Complex operator*(const Complex& a, const Real& s) { return {a.re() * s, a.im() * s}; }
Complex operator*(const Real& s, const Complex& a) { return {a.re() * s, a.im() * s}; }
Complex operator/(const Complex& a, const Real& s) { return {a.re() / s, a.im() / s}; }

Complex conj(const Complex& z) { return {z.re(), -z.im()}; }
Real norm(const Complex& z) { return z.re() * z.re() + z.im() * z.im(); }
Real abs(const Complex& z) { return hypot(z.re(), z.im()); }
Real arg(const Complex& z) { return atan2(z.im(), z.re()); }

Complex reciprocal(const Complex& z) {
  Real den = norm(z);
  return {z.re() / den, -z.im() / den};
}

Complex exp(const Complex& z) {
  Real m = exp(z.re());
  return {m * cos(z.im()), m * sin(z.im())};
}

Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }

Complex sqrt(const Complex& z) {
  if (z.is_zero()) return z;
  // sqrt((|z| + |x|)/2) on the dominant component avoids cancellation.
  Real r = abs(z);
  Real t = sqrt(ldexp(r + abs(z.re()), -1));
  if (z.re().sign() >= 0) return {t, z.im() / ldexp(t, 1)};
  Real im = z.im().sign() < 0 ? -t : t;
  return {abs(z.im()) / ldexp(t, 1), im};
}

Complex sin(const Complex& z) {
  return {sin(z.re()) * cosh(z.im()), cos(z.re()) * sinh(z.im())};
}

Complex cos(const Complex& z) {
  return {cos(z.re()) * cosh(z.im()), -(sin(z.re()) * sinh(z.im()))};
}

Complex pow(const Complex& z, long n) {
  if (n < 0) return reciprocal(pow(z, -n));
  Complex result(Real(1L).rounded(z.precision()));
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

Complex ldexp(const Complex& z, long e) { return {ldexp(z.re(), e), ldexp(z.im(), e)}; }

Real chordal_distance(const Complex& a, const Complex& b) {
  Real one(1L);
  return abs(a - b) / (sqrt(one + norm(a)) * sqrt(one + norm(b)));
}

Real chordal_distance_to_infinity(const Complex& a) { return Real(1L) / sqrt(Real(1L) + norm(a)); }

std::string to_string(const Complex& z, int digits) {
  return z.re().to_string(digits) + (z.im().sign() < 0 ? "-" : "+") +
         abs(z.im()).to_string(digits) + "i";
}

}  // namespace intmult
