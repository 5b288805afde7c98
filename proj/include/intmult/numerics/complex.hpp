#pragma once

#include <complex>
#include <string>

#include "intmult/numerics/real.hpp"

namespace intmult {

// Complex number over Real. std::complex<T> is unspecified for non-builtin T,
// so the library carries its own.
class Complex {
 public:
  Complex() = default;
  Complex(Real re) : re_(std::move(re)), im_(0L) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(double re) : re_(re), im_(0L) {}
  Complex(int re) : re_(static_cast<long>(re)), im_(0L) {}
  Complex(long re) : re_(re), im_(0L) {}
  Complex(double re, double im) : re_(re), im_(im) {}
  Complex(std::complex<double> z) : re_(z.real()), im_(z.imag()) {}

  static Complex i();
  static Complex polar(const Real& r, const Real& theta);

  const Real& re() const noexcept { return re_; }
  const Real& im() const noexcept { return im_; }
  Real& re() noexcept { return re_; }
  Real& im() noexcept { return im_; }

  long precision() const noexcept { return std::max(re_.precision(), im_.precision()); }
  Complex rounded(long bits) const { return {re_.rounded(bits), im_.rounded(bits)}; }
  std::complex<double> to_std() const { return {re_.to_double(), im_.to_double()}; }
  bool is_zero() const noexcept { return re_.is_zero() && im_.is_zero(); }
  bool is_finite() const noexcept { return re_.is_finite() && im_.is_finite(); }

  Complex operator-() const { return {-re_, -im_}; }
  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);

  friend bool operator==(const Complex& a, const Complex& b) noexcept {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

 private:
  Real re_;
  Real im_;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& s);
Complex operator*(const Real& s, const Complex& a);
Complex operator/(const Complex& a, const Real& s);

Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Real arg(const Complex& z);
Complex reciprocal(const Complex& z);
Complex exp(const Complex& z);
Complex log(const Complex& z);  // principal branch
Complex sqrt(const Complex& z);  // principal branch
Complex sin(const Complex& z);
Complex cos(const Complex& z);
Complex pow(const Complex& z, long n);
Complex ldexp(const Complex& z, long e);

// Spherical (chordal) distance between two points of the Riemann sphere given
// in affine coordinates; values lie in [0, 1].
Real chordal_distance(const Complex& a, const Complex& b);
Real chordal_distance_to_infinity(const Complex& a);

std::string to_string(const Complex& z, int digits = 0);

}  // namespace intmult
