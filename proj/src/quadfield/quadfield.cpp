#include "intmult/quadfield/quadfield.hpp"

#include "intmult/errors.hpp"
#include "intmult/numerics/exact.hpp"

namespace intmult {

ImaginaryQuadraticField make_field(long d) {
  if (d <= 0 || !is_squarefree(d)) {
    throw InvalidArgument("field parameter d must be squarefree and positive, got " + std::to_string(d));
  }
  ImaginaryQuadraticField K;
  K.d = d;
  const Real root = sqrt(Real(d));
  if (d % 4 == 3) {
    K.kind = OmegaKind::half;
    K.omega = Complex(ldexp(Real(1L), -1), ldexp(root, -1));
  } else {
    K.kind = OmegaKind::sqrt;
    K.omega = Complex(Real(0L), root);
  }
  return K;
}

std::pair<Real, Real> coordinates(const Complex& lambda, const ImaginaryQuadraticField& K) {
  Real y = lambda.im() / K.omega.im();
  Real x = lambda.re() - y * K.omega.re();
  return {x, y};
}

MembershipVerdict nearest_lattice_point(const Complex& lambda, const ImaginaryQuadraticField& K) {
  auto [xr, yr] = coordinates(lambda, K);
  const Real limit = ldexp(Real(1L), 62);
  if (!(abs(xr) < limit && abs(yr) < limit)) {
    throw ResourceLimit("lattice coordinates of " + to_string(lambda, 12) + " overflow");
  }
  const long x0 = floor(xr).to_long();
  const long y0 = floor(yr).to_long();
  MembershipVerdict best;
  best.distance = Real::infinity();
  for (long dx = 0; dx <= 1; ++dx) {
    for (long dy = 0; dy <= 1; ++dy) {
      const long x = x0 + dx, y = y0 + dy;
      Real dist = abs(lambda - (Complex(Real(x)) + K.omega * Real(y)));
      if (dist < best.distance) {
        best.distance = dist;
        best.x = x;
        best.y = y;
      }
    }
  }
  return best;
}

MembershipVerdict is_algebraic_integer(const Complex& lambda, const Real& lambda_residual,
                                       const ImaginaryQuadraticField& K, const Real& tol) {
  if (tol < lambda_residual) {
    throw ToleranceTooSmall("membership tolerance " + tol.to_string(6) + " is below the input residual " +
                            lambda_residual.to_string(6));
  }
  MembershipVerdict v = nearest_lattice_point(lambda, K);
  v.tolerance_used = tol;
  v.member = v.distance <= tol;
  return v;
}

std::vector<long> candidate_fields(const std::vector<CertifiedValue>& lambdas, long d_max, const Real& tol) {
  if (d_max < 1) throw InvalidArgument("d_max must be >= 1");
  std::vector<long> out;
  for (long d = 1; d <= d_max; ++d) {
    if (!is_squarefree(d)) continue;
    const ImaginaryQuadraticField K = make_field(d);
    bool all = true;
    for (const auto& l : lambdas) {
      if (!is_algebraic_integer(l.value, l.residual, K, tol).member) {
        all = false;
        break;
      }
    }
    if (all) out.push_back(d);
  }
  return out;
}

Real default_membership_tol(long bits) { return min(Real(1e-9), exp2i(-(bits / 3))); }

nlohmann::json verdict_to_json(const MembershipVerdict& v, long d) {
  return {{"d", d},
          {"member", v.member},
          {"x", v.x},
          {"y", v.y},
          {"distance", v.distance.to_double()},
          {"tol", v.tolerance_used.to_double()}};
}

}  // namespace intmult
