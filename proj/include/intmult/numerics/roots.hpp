#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "intmult/numerics/polynomial.hpp"

namespace intmult {

struct CertifiedRoot {
  Complex value;
  Real residual;    // |p(value)| for the monic-normalized polynomial
  Real separation;  // distance to the nearest other cluster representative
  int multiplicity = 1;
};

// A root-finding problem given by an evaluator instead of coefficients. Used
// directly for period equations, whose expanded coefficients are badly
// conditioned while iterating the map is not.
struct RootProblem {
  int degree = 0;
  Real initial_radius;
  std::function<std::pair<Complex, Complex>(const Complex&)> evaluate;  // (F, F')
  // Accepts an approximation once its residual is within the problem's bound.
  std::function<bool(const Complex&)> residual_ok;
  std::function<Real(const Complex&)> residual;
};

struct AberthOptions {
  int max_sweeps = 0;  // 0 selects 200 * degree
};

// Simultaneous Aberth-Ehrlich iteration (Jacobi sweeps, deterministic). Starts
// from equidistributed points on a circle of the problem's radius with a
// half-step angular offset. Returns `degree` approximations, repeated roots
// appearing as nearby copies. Runs at the working precision.
// Throws NonConvergence when the sweep budget runs out before every residual
// is accepted.
std::vector<Complex> aberth_solve(const RootProblem& problem, const AberthOptions& opts = {});

// Groups approximations closer than `separation * max(1, |z|)` and reports
// cluster means with multiplicities. Residual is filled from `residual`.
std::vector<CertifiedRoot> cluster_roots(const std::vector<Complex>& approximations, const Real& separation,
                                         const std::function<Real(const Complex&)>& residual);

// Fujiwara bound on the moduli of the roots of p.
Real root_radius_bound(const ComplexPolynomial& p);

// All roots of p counted with multiplicity, escalating precision (doubling,
// up to 8x the context bits) when the first attempt fails. Values are rounded
// back to the context precision.
std::vector<CertifiedRoot> find_roots(const ComplexPolynomial& p, const PrecisionContext& ctx);
std::vector<CertifiedRoot> find_roots(const ExactPolynomial& p, const PrecisionContext& ctx);

}  // namespace intmult
