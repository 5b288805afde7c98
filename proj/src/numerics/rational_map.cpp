#include "intmult/numerics/rational_map.hpp"

#include "intmult/errors.hpp"

namespace intmult {

RationalMap::RationalMap(ExactPolynomial num, ExactPolynomial den) {
  if (den.is_zero()) throw InvalidArgument("rational map with zero denominator");
  ExactPolynomial g = gcd(num, den);
  if (g.degree() > 0) {
    num = divmod(num, g).first;
    den = divmod(den, g).first;
  }
  num_ = std::move(num);
  den_ = std::move(den);
  normalize();
}

RationalMap::RationalMap(Trusted, ExactPolynomial num, ExactPolynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw InvalidArgument("rational map with zero denominator");
  normalize();
}

RationalMap RationalMap::from_coprime(ExactPolynomial num, ExactPolynomial den) {
  return RationalMap(Trusted{}, std::move(num), std::move(den));
}

void RationalMap::normalize() {
  if (degree() < 1) throw InvalidArgument("rational map must have degree >= 1");
  // den is nonzero, so its leading coefficient is nonzero.
  ExactScalar inv = ExactScalar(1L) / den_.leading();
  num_ = inv * num_;
  den_ = inv * den_;
  if (num_.field() && den_.field() && *num_.field() != *den_.field()) {
    throw InvalidArgument("numerator and denominator over different fields");
  }
}

std::optional<long> RationalMap::field() const {
  auto f = num_.field();
  return f ? f : den_.field();
}

ExactPolynomial RationalMap::fixed_point_polynomial() const {
  return num_ - ExactPolynomial::identity() * den_;
}

namespace {

// f(A/B) = sum n_i A^i B^(d-i) / sum d_i A^i B^(d-i)
std::pair<ExactPolynomial, ExactPolynomial> substitute(const RationalMap& f, const ExactPolynomial& A,
                                                       const ExactPolynomial& B) {
  const int d = f.degree();
  std::vector<ExactPolynomial> a_pow{ExactPolynomial{1}};
  std::vector<ExactPolynomial> b_pow{ExactPolynomial{1}};
  for (int i = 1; i <= d; ++i) {
    a_pow.push_back(a_pow.back() * A);
    b_pow.push_back(b_pow.back() * B);
  }
  ExactPolynomial num;
  ExactPolynomial den;
  for (int i = 0; i <= d; ++i) {
    const ExactScalar ni = f.num().coeff(i);
    const ExactScalar di = f.den().coeff(i);
    if (ni.is_zero() && di.is_zero()) continue;
    ExactPolynomial term = a_pow[i] * b_pow[d - i];
    if (!ni.is_zero()) num = num + ni * term;
    if (!di.is_zero()) den = den + di * term;
  }
  return {std::move(num), std::move(den)};
}

void check_cap(const RationalMap& f, int p, long degree_cap) {
  if (p < 1) throw InvalidArgument("iterate count must be >= 1");
  long deg = 1;
  for (int i = 0; i < p; ++i) {
    deg *= f.degree();
    if (deg > degree_cap) {
      throw ResourceLimit("degree(f)^" + std::to_string(p) + " exceeds the iterate cap " +
                          std::to_string(degree_cap) + "; lower p");
    }
  }
}

}  // namespace

RationalMap compose(const RationalMap& f, const RationalMap& g) {
  auto [num, den] = substitute(f, g.num(), g.den());
  return RationalMap::from_coprime(std::move(num), std::move(den));
}

std::pair<ExactPolynomial, ExactPolynomial> homogeneous_iterate(const RationalMap& f, int p, long degree_cap) {
  check_cap(f, p, degree_cap);
  std::pair<ExactPolynomial, ExactPolynomial> ab{f.num(), f.den()};
  for (int i = 1; i < p; ++i) ab = substitute(f, ab.first, ab.second);
  return ab;
}

RationalMap compose_iterate(const RationalMap& f, int p, long degree_cap) {
  check_cap(f, p, degree_cap);
  RationalMap result = f;
  for (int i = 1; i < p; ++i) result = compose(f, result);
  return result;
}

}  // namespace intmult
