#include "intmult/maps/maps.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <random>
#include <sstream>

#include "intmult/errors.hpp"

namespace intmult {

RationalMap power_map(int d, int sign) {
  if (d < 2) throw InvalidArgument("power_map needs d >= 2");
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  ExactPolynomial zd = ExactPolynomial::monomial(ExactScalar(1L), d);
  if (sign == 1) return RationalMap(zd);
  return RationalMap(ExactPolynomial{1}, zd);
}

RationalMap chebyshev(int d, int sign) {
  if (d < 2) throw InvalidArgument("chebyshev needs d >= 2");
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  const ExactPolynomial w = ExactPolynomial::identity();
  ExactPolynomial prev{2};
  ExactPolynomial cur = w;
  for (int k = 1; k < d; ++k) {
    ExactPolynomial next = w * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return RationalMap(ExactScalar(static_cast<long>(sign)) * cur);
}

RationalMap lattes_doubling(const EllipticCurveData& curve) {
  if (!curve.nonsingular()) throw InvalidArgument("singular curve: 4a^3 + 27b^2 = 0");
  const ExactScalar a(curve.a), b(curve.b);
  // (x^4 - 2a x^2 - 8b x + a^2) / (4 (x^3 + a x + b))
  ExactPolynomial num(std::vector<ExactScalar>{a * a, ExactScalar(-8L) * b, ExactScalar(-2L) * a, 0L, 1L});
  ExactPolynomial den(std::vector<ExactScalar>{ExactScalar(4L) * b, ExactScalar(4L) * a, 0L, 4L});
  RationalMap f(num, den);
  if (f.degree() != 4) throw VerificationFailure("doubling map lost degree on a nonsingular curve");
  return f;
}

RationalMap Mobius::as_map() const {
  return RationalMap(ExactPolynomial(std::vector<ExactScalar>{b, a}), ExactPolynomial(std::vector<ExactScalar>{d, c}));
}

RationalMap mobius_conjugate(const RationalMap& f, const Mobius& M) {
  if (M.determinant().is_zero()) throw InvalidArgument("degenerate Mobius transformation: ad - bc = 0");
  return compose(M.as_map(), compose(f, M.inverse().as_map()));
}

namespace {
constexpr std::size_t kMaxCachedPrecisions = 1024;
}  // namespace

struct RationalEvaluator::Cache {
  struct Entry {
    long bits;
    ComplexPolynomial num;
    ComplexPolynomial den;
  };
  std::mutex mu;
  std::deque<Entry> entries;  // stable addresses under push_back
};

RationalEvaluator::RationalEvaluator(RationalMap f)
    : f_(std::move(f)), description_(describe(f_)), cache_(std::make_shared<Cache>()) {}

std::vector<Complex> MapEvaluator::taylor(const Complex& z, int order) const {
  const Jet2 j = jet(z);
  std::vector<Complex> c{j.v, j.d1, j.d2 / Complex(2L)};
  c.resize(static_cast<std::size_t>(std::clamp(order, 0, 2)) + 1);
  return c;
}

RationalEvaluator::FloatPolys RationalEvaluator::polys() const {
  const long bits = Real::working_precision();
  const Cache::Entry* polys = nullptr;
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    for (const auto& e : cache_->entries) {
      if (e.bits == bits) polys = &e;
    }
    if (!polys) {
      // entries are never erased, so the pointer stays valid after unlock
      if (cache_->entries.size() == kMaxCachedPrecisions) {
        throw ResourceLimit("too many precisions for one evaluator");
      }
      cache_->entries.push_back({bits, f_.num().to_complex(), f_.den().to_complex()});
      polys = &cache_->entries.back();
    }
  }
  return {polys->num, polys->den};
}

Jet2 RationalEvaluator::jet(const Complex& z) const {
  const FloatPolys polys = this->polys();
  auto n = poly_eval_derivs(polys.num, z, 2);
  auto d = poly_eval_derivs(polys.den, z, 2);
  Jet2 j;
  j.v = n[0] / d[0];
  // from f D = N differentiated twice
  j.d1 = (n[1] - j.v * d[1]) / d[0];
  j.d2 = (n[2] - Complex(2L) * j.d1 * d[1] - j.v * d[2]) / d[0];
  return j;
}

std::vector<Complex> RationalEvaluator::taylor(const Complex& z, int order) const {
  if (order < 0) throw InvalidArgument("negative Taylor order");
  const FloatPolys polys = this->polys();
  // shifted coefficients are p^(k)(z)/k!
  auto shifted = [&](const ComplexPolynomial& p) {
    auto d = poly_eval_derivs(p, z, order);
    Complex fact(1L);
    for (int k = 1; k <= order; ++k) {
      fact *= Complex(static_cast<long>(k));
      d[k] /= fact;
    }
    return d;
  };
  const auto n = shifted(polys.num);
  const auto d = shifted(polys.den);
  std::vector<Complex> q(order + 1);
  for (int k = 0; k <= order; ++k) {
    Complex acc = n[k];
    for (int j = 1; j <= k; ++j) acc -= d[j] * q[k - j];
    q[k] = acc / d[0];
  }
  return q;
}

EntireEvaluator::EntireEvaluator(Fn fn, std::string description, bool is_polynomial)
    : fn_(std::move(fn)), description_(std::move(description)), is_polynomial_(is_polynomial) {
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Real h(1e-4);
  for (int i = 0; i < 10;) {
    Complex z(u(rng), u(rng));
    if (abs(z) > Real(1L)) continue;
    ++i;
    const Jet2 j = fn_(z);
    const Jet2 jp = fn_(z + Complex(h));
    const Jet2 jm = fn_(z - Complex(h));
    const Complex fd1 = (jp.v - jm.v) / (Complex(2L) * Complex(h));
    const Complex fd2 = (jp.d1 - jm.d1) / (Complex(2L) * Complex(h));
    const Real bad1 = abs(fd1 - j.d1) / max(Real(1L), abs(j.d1));
    const Real bad2 = abs(fd2 - j.d2) / max(Real(1L), abs(j.d2));
    if (bad1 > Real(1e-6) || bad2 > Real(1e-6)) {
      throw VerificationFailure("derivative of '" + description_ + "' disagrees with finite differences at " +
                                to_string(z, 10));
    }
  }
}

EntireEvaluator EntireEvaluator::polynomial(const ExactPolynomial& p) {
  if (p.degree() < 1) throw InvalidArgument("entire polynomial must be nonconstant");
  auto fn = [p](const Complex& z) {
    auto d = poly_eval_derivs(p.to_complex(), z, 2);
    return Jet2{d[0], d[1], d[2]};
  };
  return EntireEvaluator(fn, describe(p), true);
}

EntireEvaluator EntireEvaluator::scaled_sin(double c) {
  auto fn = [c](const Complex& z) {
    const Complex s = sin(z);
    return Jet2{Complex(c) * s, Complex(c) * cos(z), -Complex(c) * s};
  };
  std::ostringstream os;
  os << c << "*sin(z)";
  return EntireEvaluator(fn, os.str(), false);
}

EntireEvaluator EntireEvaluator::scaled_exp(double c) {
  auto fn = [c](const Complex& z) {
    const Complex e = Complex(c) * exp(z);
    return Jet2{e, e, e};
  };
  std::ostringstream os;
  os << c << "*exp(z)";
  return EntireEvaluator(fn, os.str(), false);
}

std::string describe(const ExactPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (int k = p.degree(); k >= 0; --k) {
    const ExactScalar c = p.coeff(k);
    if (c.is_zero()) continue;
    std::string cs = c.to_string();
    if (!c.is_rational()) cs = "(" + cs + ")";
    if (!s.empty()) {
      if (cs[0] == '-') {
        s += " - ";
        cs.erase(0, 1);
      } else {
        s += " + ";
      }
    }
    if (k == 0) {
      s += cs;
      continue;
    }
    if (cs == "-1") cs = "-";
    else if (cs == "1") cs.clear();
    else cs += "*";
    s += cs + (k == 1 ? "z" : "z^" + std::to_string(k));
  }
  return s;
}

std::string describe(const RationalMap& f) {
  if (f.is_polynomial() && f.den().coeff(0) == ExactScalar(1L)) return describe(f.num());
  return "(" + describe(f.num()) + ")/(" + describe(f.den()) + ")";
}

}  // namespace intmult
