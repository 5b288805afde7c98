#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>
#include <utility>

namespace intmult {

// Binary floating-point real with a per-value mantissa length (MPFR backed).
//
// Newly created values take the calling thread's working precision (see
// PrecisionScope). Arithmetic results carry the larger precision of the two
// operands and are rounded to nearest.
class Real {
 public:
  static long working_precision() noexcept;
  static void set_working_precision(long bits) noexcept;

  Real() : Real(0L) {}
  Real(double x);
  Real(int x) : Real(static_cast<long>(x)) {}
  Real(long x);
  explicit Real(const mpq_class& q);
  explicit Real(const mpz_class& z);
  // Parses a decimal or scientific string; throws InvalidArgument on garbage.
  explicit Real(const std::string& text);

  static Real with_precision(long bits);
  static Real pi();
  static Real infinity();

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  long precision() const noexcept { return static_cast<long>(mpfr_get_prec(v_)); }
  // Rounds this value to `bits` of mantissa (may lower or raise precision).
  Real rounded(long bits) const;

  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_ptr get() noexcept { return v_; }

  double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const noexcept { return mpfr_get_si(v_, MPFR_RNDN); }
  mpz_class to_mpz() const;  // rounds to nearest
  // Shortest-ish decimal rendering with `digits` significant digits (0 = enough
  // to round-trip at this precision).
  std::string to_string(int digits = 0) const;

  bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
  int sign() const noexcept { return mpfr_sgn(v_); }
  long exponent() const noexcept;  // floor(log2|x|) + 1, 0 for zero

  Real operator-() const;
  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);

  friend bool operator==(const Real& a, const Real& b) noexcept {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b) noexcept {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  struct Uninit {};
  explicit Real(Uninit, long bits) noexcept { mpfr_init2(v_, bits); }
  static Real result_for(const Real& a, const Real& b) noexcept {
    return Real(Uninit{}, std::max(a.precision(), b.precision()));
  }
  friend Real result_like(const Real& a);

  mpfr_t v_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real log2(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real pow(const Real& x, const Real& y);
Real ldexp(const Real& x, long e);
Real floor(const Real& x);
Real round(const Real& x);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);

// 2^e as a Real at working precision.
Real exp2i(long e);

// Sets the working precision of the calling thread for its lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) : saved_(Real::working_precision()) {
    Real::set_working_precision(bits);
  }
  ~PrecisionScope() { Real::set_working_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

}  // namespace intmult
