#pragma once

#include <utility>
#include <vector>

#include "json.hpp"
#include "intmult/numerics/complex.hpp"

namespace intmult {

enum class OmegaKind { sqrt, half };

// Q(sqrt(-d)) with ring of integers Z + Z omega.
struct ImaginaryQuadraticField {
  long d = 1;
  OmegaKind kind = OmegaKind::sqrt;
  Complex omega;  // at the working precision of make_field
};

struct MembershipVerdict {
  bool member = false;
  long x = 0;
  long y = 0;
  Real distance;
  Real tolerance_used;
};

// omega = sqrt(-d) for d = 1, 2 mod 4 and (1 + sqrt(-d))/2 for d = 3 mod 4.
// Throws InvalidArgument unless d is squarefree and positive.
ImaginaryQuadraticField make_field(long d);

// Real (x, y) with lambda = x + y omega.
std::pair<Real, Real> coordinates(const Complex& lambda, const ImaginaryQuadraticField& K);

// Nearest point x + y omega of the lattice and its distance, found among the
// four corners of the cell containing lambda. Throws ResourceLimit when the
// coordinates do not fit in a long.
MembershipVerdict nearest_lattice_point(const Complex& lambda, const ImaginaryQuadraticField& K);

// Throws ToleranceTooSmall when tol < lambda_residual.
MembershipVerdict is_algebraic_integer(const Complex& lambda, const Real& lambda_residual,
                                       const ImaginaryQuadraticField& K, const Real& tol);

struct CertifiedValue {
  Complex value;
  Real residual;
};

// Squarefree d <= d_max whose ring contains every input.
std::vector<long> candidate_fields(const std::vector<CertifiedValue>& lambdas, long d_max, const Real& tol);

// 1e-9 at 53 bits, 2^(-bits/3) once that is smaller.
Real default_membership_tol(long bits);

inline constexpr long kDefaultDMax = 163;

nlohmann::json verdict_to_json(const MembershipVerdict& v, long d);

}  // namespace intmult
