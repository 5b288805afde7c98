#include "intmult/numerics/real.hpp"

#include <cmath>
#include <vector>

#include "intmult/errors.hpp"

namespace intmult {

namespace {
thread_local long g_working_precision = 53;

// Marks a moved-from value so the destructor skips mpfr_clear.
inline void set_uninitialized(mpfr_ptr x) noexcept { x->_mpfr_d = nullptr; }
inline bool is_initialized(mpfr_srcptr x) noexcept { return x->_mpfr_d != nullptr; }
}  // namespace

long Real::working_precision() noexcept { return g_working_precision; }

void Real::set_working_precision(long bits) noexcept {
  g_working_precision = bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : bits;
}

Real result_like(const Real& a) { return Real(Real::Uninit{}, a.precision()); }

Real::Real(double x) {
  mpfr_init2(v_, std::max(working_precision(), 53L));
  mpfr_set_d(v_, x, MPFR_RNDN);
}

Real::Real(long x) {
  mpfr_init2(v_, working_precision());
  mpfr_set_si(v_, x, MPFR_RNDN);
}

Real::Real(const mpq_class& q) {
  mpfr_init2(v_, working_precision());
  mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const mpz_class& z) {
  mpfr_init2(v_, working_precision());
  mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const std::string& text) {
  mpfr_init2(v_, working_precision());
  char* end = nullptr;
  if (!text.empty()) mpfr_strtofr(v_, text.c_str(), &end, 10, MPFR_RNDN);
  if (text.empty() || end == text.c_str() || *end != '\0') {
    mpfr_clear(v_);
    throw InvalidArgument("not a real number: '" + text + "'");
  }
}

Real Real::with_precision(long bits) {
  Real r(Uninit{}, bits);
  mpfr_set_zero(r.v_, 1);
  return r;
}

Real Real::pi() {
  Real r(Uninit{}, working_precision());
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

Real Real::infinity() {
  Real r(Uninit{}, working_precision());
  mpfr_set_inf(r.v_, 1);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  v_[0] = other.v_[0];
  set_uninitialized(other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    if (!is_initialized(v_)) {
      mpfr_init2(v_, mpfr_get_prec(other.v_));
    } else if (mpfr_get_prec(v_) != mpfr_get_prec(other.v_)) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    }
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    if (is_initialized(v_)) mpfr_clear(v_);
    v_[0] = other.v_[0];
    set_uninitialized(other.v_);
  }
  return *this;
}

Real::~Real() {
  if (is_initialized(v_)) mpfr_clear(v_);
}

Real Real::rounded(long bits) const {
  Real r(Uninit{}, bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

mpz_class Real::to_mpz() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v_)) return "0";
  if (digits <= 0) {
    digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30103)) + 1;
  }
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

long Real::exponent() const noexcept {
  if (!mpfr_regular_p(v_)) return 0;
  return static_cast<long>(mpfr_get_exp(v_));
}

Real Real::operator-() const {
  Real r = result_like(*this);
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r = Real::result_for(a, b);
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r = Real::result_for(a, b);
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r = Real::result_for(a, b);
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r = Real::result_for(a, b);
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

#define INTMULT_UNARY(name, fn)            \
  Real name(const Real& x) {               \
    Real r = result_like(x);               \
    fn(r.get(), x.get(), MPFR_RNDN);       \
    return r;                              \
  }

INTMULT_UNARY(abs, mpfr_abs)
INTMULT_UNARY(sqrt, mpfr_sqrt)
INTMULT_UNARY(exp, mpfr_exp)
INTMULT_UNARY(log, mpfr_log)
INTMULT_UNARY(log2, mpfr_log2)
INTMULT_UNARY(sin, mpfr_sin)
INTMULT_UNARY(cos, mpfr_cos)
INTMULT_UNARY(sinh, mpfr_sinh)
INTMULT_UNARY(cosh, mpfr_cosh)
#undef INTMULT_UNARY

Real atan2(const Real& y, const Real& x) {
  Real r = Real::with_precision(std::max(x.precision(), y.precision()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

Real hypot(const Real& x, const Real& y) {
  Real r = Real::with_precision(std::max(x.precision(), y.precision()));
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r = result_like(x);
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r = Real::with_precision(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r = result_like(x);
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

Real floor(const Real& x) {
  Real r = result_like(x);
  mpfr_floor(r.get(), x.get());
  return r;
}

Real round(const Real& x) {
  Real r = result_like(x);
  mpfr_rint(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real exp2i(long e) {
  Real r(1L);
  mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
  return r;
}

}  // namespace intmult
