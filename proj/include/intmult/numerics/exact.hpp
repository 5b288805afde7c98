#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "intmult/numerics/complex.hpp"

namespace intmult {

bool is_squarefree(long n);

// Exact element rational_part + radical_part * sqrt(-d) of Q or Q(sqrt(-d)).
//
// A scalar without a field tag is a plain rational. Mixing two different
// tags is an error; mixing a tagged and an untagged value yields the tag.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(long v) : rational_(v) {}
  ExactScalar(int v) : rational_(v) {}
  ExactScalar(mpq_class q) : rational_(std::move(q)) { rational_.canonicalize(); }
  ExactScalar(mpq_class rational, mpq_class radical, long d);

  static ExactScalar sqrt_minus(long d) { return ExactScalar(mpq_class(0), mpq_class(1), d); }

  const mpq_class& rational_part() const noexcept { return rational_; }
  const mpq_class& radical_part() const noexcept { return radical_; }
  std::optional<long> field() const noexcept { return field_; }

  bool is_zero() const noexcept { return sgn(rational_) == 0 && sgn(radical_) == 0; }
  bool is_rational() const noexcept { return sgn(radical_) == 0; }

  ExactScalar conj() const;
  // Field norm a^2 + d b^2 (= |x|^2).
  mpq_class norm() const;
  // Value as a complex float at the working precision.
  Complex to_complex() const;
  std::string to_string() const;

  ExactScalar operator-() const;
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  ExactScalar& operator/=(const ExactScalar& o);

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

  // Value equality; tags are ignored when the radical part vanishes.
  friend bool operator==(const ExactScalar& a, const ExactScalar& b);

 private:
  static std::optional<long> merge_field(const std::optional<long>& a, const std::optional<long>& b);

  mpq_class rational_{0};
  mpq_class radical_{0};
  std::optional<long> field_;
};

}  // namespace intmult
