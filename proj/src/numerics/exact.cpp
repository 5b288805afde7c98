#include "intmult/numerics/exact.hpp"

#include "intmult/errors.hpp"

namespace intmult {

bool is_squarefree(long n) {
  if (n <= 0) return false;
  for (long p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

ExactScalar::ExactScalar(mpq_class rational, mpq_class radical, long d)
    : rational_(std::move(rational)), radical_(std::move(radical)), field_(d) {
  if (!is_squarefree(d)) {
    throw InvalidArgument("field tag must be a squarefree positive integer, got " + std::to_string(d));
  }
  rational_.canonicalize();
  radical_.canonicalize();
}

std::optional<long> ExactScalar::merge_field(const std::optional<long>& a, const std::optional<long>& b) {
  if (a && b && *a != *b) {
    throw InvalidArgument("cannot combine scalars of Q(sqrt(-" + std::to_string(*a) + ")) and Q(sqrt(-" +
                          std::to_string(*b) + "))");
  }
  return a ? a : b;
}

ExactScalar ExactScalar::conj() const {
  ExactScalar r = *this;
  r.radical_ = -radical_;
  return r;
}

mpq_class ExactScalar::norm() const {
  mpq_class n = rational_ * rational_;
  if (field_) n += mpq_class(*field_) * radical_ * radical_;
  return n;
}

Complex ExactScalar::to_complex() const {
  if (!field_ || sgn(radical_) == 0) return Complex(Real(rational_), Real(0L));
  return Complex(Real(rational_), Real(radical_) * sqrt(Real(*field_)));
}

std::string ExactScalar::to_string() const {
  std::string s = rational_.get_str();
  if (field_ && sgn(radical_) != 0) {
    s += (sgn(radical_) < 0 ? " - " : " + ");
    s += mpq_class(abs(radical_)).get_str() + "*sqrt(-" + std::to_string(*field_) + ")";
  }
  return s;
}

ExactScalar ExactScalar::operator-() const {
  ExactScalar r = *this;
  r.rational_ = -rational_;
  r.radical_ = -radical_;
  return r;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  field_ = merge_field(field_, o.field_);
  rational_ += o.rational_;
  radical_ += o.radical_;
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  field_ = merge_field(field_, o.field_);
  rational_ -= o.rational_;
  radical_ -= o.radical_;
  return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  field_ = merge_field(field_, o.field_);
  if (sgn(radical_) == 0 && sgn(o.radical_) == 0) {
    rational_ *= o.rational_;
    return *this;
  }
  // (a + b s)(c + e s) with s^2 = -d
  const mpq_class d(*field_);
  mpq_class re = rational_ * o.rational_ - d * radical_ * o.radical_;
  mpq_class im = rational_ * o.radical_ + radical_ * o.rational_;
  rational_ = std::move(re);
  radical_ = std::move(im);
  return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  if (o.is_zero()) throw InvalidArgument("exact division by zero");
  field_ = merge_field(field_, o.field_);
  if (sgn(o.radical_) == 0) {
    rational_ /= o.rational_;
    radical_ /= o.rational_;
    return *this;
  }
  mpq_class n = o.norm();
  *this *= o.conj();
  rational_ /= n;
  radical_ /= n;
  return *this;
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  if (a.rational_ != b.rational_ || a.radical_ != b.radical_) return false;
  if (sgn(a.radical_) == 0) return true;
  return a.field_ == b.field_;
}

}  // namespace intmult
