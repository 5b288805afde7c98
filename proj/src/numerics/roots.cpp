#include "intmult/numerics/roots.hpp"

#include <numeric>

#include "intmult/errors.hpp"

namespace intmult {

namespace {

constexpr int kStagnationSweeps = 8;
constexpr int kPolishSteps = 4;
constexpr int kMaxDoublings = 3;

Real max1(const Real& x) { return x < Real(1L) ? Real(1L) : x; }

}  // namespace

std::vector<Complex> aberth_solve(const RootProblem& problem, const AberthOptions& opts) {
  const int n = problem.degree;
  if (n < 1) throw InvalidArgument("root finding needs degree >= 1");
  const long bits = Real::working_precision();
  const int max_sweeps = opts.max_sweeps > 0 ? opts.max_sweeps : 200 * n;
  const Real freeze_eps = exp2i(-(bits - 8));
  const Real two_pi = ldexp(Real::pi(), 1);

  std::vector<Complex> z;
  z.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Real theta = two_pi * (Real(static_cast<long>(k)) + Real(0.5)) / Real(static_cast<long>(n));
    z.push_back(Complex::polar(problem.initial_radius, theta));
  }
  std::vector<bool> frozen(static_cast<std::size_t>(n), false);
  std::vector<Real> last_corr(static_cast<std::size_t>(n), Real::infinity());
  // A stalled root is only accepted once its correction is this small; noise
  // at a simple root is far below it, at a triple root comparable.
  const Real settle_eps = exp2i(-(bits / 3));
  auto settled = [&](int k) {
    return frozen[k] || (last_corr[k] <= settle_eps * max1(abs(z[k])) && problem.residual_ok(z[k]));
  };
  Real best_max_corr = Real::infinity();
  int since_improvement = 0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    std::vector<Complex> next = z;
    Real max_corr(0L);
    bool any_active = false;
    for (int k = 0; k < n; ++k) {
      if (frozen[k]) continue;
      any_active = true;
      auto [f, df] = problem.evaluate(z[k]);
      if (f.is_zero()) {
        frozen[k] = true;
        continue;
      }
      Complex ratio = df.is_zero() ? Complex(ldexp(max1(abs(z[k])), -4)) : f / df;
      Complex sum(Real(0L), Real(0L));
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        Complex diff = z[k] - z[j];
        if (!diff.is_zero()) sum += reciprocal(diff);
      }
      Complex corr = ratio / (Complex(Real(1L)) - ratio * sum);
      if (!corr.is_finite()) corr = ratio;
      next[k] = z[k] - corr;
      Real size = abs(corr);
      last_corr[k] = size;
      if (size <= freeze_eps * max1(abs(z[k]))) frozen[k] = true;
      if (size > max_corr) max_corr = size;
    }
    z = std::move(next);
    if (!any_active) break;

    if (max_corr < best_max_corr) {
      best_max_corr = ldexp(max_corr, -1);  // require a real decrease
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
    if (since_improvement >= kStagnationSweeps) {
      bool all_ok = true;
      for (int k = 0; k < n && all_ok; ++k) all_ok = settled(k);
      if (all_ok) break;
    }
    if (sweep + 1 == max_sweeps) {
      double worst = 0.0;
      bool all_ok = true;
      for (int k = 0; k < n; ++k) {
        if (!settled(k)) {
          all_ok = false;
          worst = std::max(worst, problem.residual(z[k]).to_double());
        }
      }
      if (!all_ok) {
        throw NonConvergence("Aberth iteration exhausted " + std::to_string(max_sweeps) + " sweeps", worst);
      }
    }
  }

  // Newton polish; keeps a step only if the residual does not grow.
  for (auto& root : z) {
    for (int it = 0; it < kPolishSteps; ++it) {
      auto [f, df] = problem.evaluate(root);
      if (f.is_zero() || df.is_zero()) break;
      Complex cand = root - f / df;
      if (problem.residual(cand) <= problem.residual(root)) {
        root = std::move(cand);
      } else {
        break;
      }
    }
  }

  for (const auto& root : z) {
    if (!problem.residual_ok(root)) {
      throw NonConvergence("root residual above certification bound", problem.residual(root).to_double());
    }
  }
  return z;
}

std::vector<CertifiedRoot> cluster_roots(const std::vector<Complex>& approximations, const Real& separation,
                                         const std::function<Real(const Complex&)>& residual) {
  const std::size_t n = approximations.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Real scale = max1(max(abs(approximations[i]), abs(approximations[j])));
      if (abs(approximations[i] - approximations[j]) < separation * scale) parent[find(i)] = find(j);
    }
  }

  std::vector<CertifiedRoot> roots;
  std::vector<std::size_t> cluster_of(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = find(i);
    if (cluster_of[r] == n) {
      cluster_of[r] = roots.size();
      roots.push_back(CertifiedRoot{approximations[i], Real(0L), Real(0L), 0});
      roots.back().value = Complex(Real(0L), Real(0L));
    }
    CertifiedRoot& c = roots[cluster_of[r]];
    c.value += approximations[i];
    c.multiplicity += 1;
  }
  for (auto& c : roots) {
    c.value = c.value / Real(static_cast<long>(c.multiplicity));
    c.residual = residual(c.value);
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Real best = Real::infinity();
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (i != j) best = min(best, abs(roots[i].value - roots[j].value));
    }
    roots[i].separation = best;
  }
  return roots;
}

Real root_radius_bound(const ComplexPolynomial& p) {
  const int n = p.degree();
  if (n < 1) return Real(1L);
  Real log_lead = log(abs(p.leading()));
  Real best = Real::infinity();
  bool any = false;
  for (int k = 1; k <= n; ++k) {
    const Complex& c = p[n - k];
    if (c.is_zero()) continue;
    Real mag = log(abs(c)) - log_lead;
    if (k == n) mag -= log(Real(2L));
    Real term = mag / Real(static_cast<long>(k));
    if (!any || term > best) best = term;
    any = true;
  }
  if (!any) return Real(1L);
  return ldexp(exp(best), 1);
}

namespace {

std::vector<CertifiedRoot> solve_monic(const ComplexPolynomial& p, const Real& tol, const Real& separation) {
  const int n = p.degree();
  // Exact zero roots are split off before iterating.
  int zeros = 0;
  while (zeros < n && p[zeros].is_zero()) ++zeros;
  std::vector<Complex> shifted(p.coefficients().begin() + zeros, p.coefficients().end());
  const Complex lead = p.leading();
  for (auto& c : shifted) c = c / lead;
  ComplexPolynomial q(std::move(shifted));

  auto residual = [&p, &lead](const Complex& z) { return abs(p.evaluate(z)) / abs(lead); };
  std::vector<Complex> approx(static_cast<std::size_t>(zeros), Complex(Real(0L), Real(0L)));
  if (q.degree() >= 1) {
    RootProblem problem;
    problem.degree = q.degree();
    problem.initial_radius = root_radius_bound(q);
    problem.evaluate = [&q](const Complex& z) {
      auto d = poly_eval_derivs(q, z, 1);
      return std::pair<Complex, Complex>(d[0], d[1]);
    };
    problem.residual = [&q](const Complex& z) { return abs(q.evaluate(z)); };
    const int deg = q.degree();
    problem.residual_ok = [&q, &tol, deg](const Complex& z) {
      return abs(q.evaluate(z)) <= tol * max1(pow(abs(z), static_cast<long>(deg)));
    };
    auto found = aberth_solve(problem);
    approx.insert(approx.end(), found.begin(), found.end());
  }
  return cluster_roots(approx, separation, residual);
}

}  // namespace

std::vector<CertifiedRoot> find_roots(const ComplexPolynomial& p, const PrecisionContext& ctx) {
  ctx.validate();
  if (p.degree() < 1) throw InvalidArgument("find_roots needs degree >= 1");
  const Real tol = ctx.tol();
  const Real separation = ctx.separation();
  long bits = ctx.mantissa_bits;
  for (int attempt = 0;; ++attempt) {
    try {
      PrecisionScope scope(bits);
      auto roots = solve_monic(p, tol, separation);
      for (auto& r : roots) r.value = r.value.rounded(ctx.mantissa_bits);
      return roots;
    } catch (const NonConvergence&) {
      if (attempt == kMaxDoublings) throw;
      bits *= 2;
    }
  }
}

std::vector<CertifiedRoot> find_roots(const ExactPolynomial& p, const PrecisionContext& ctx) {
  ctx.validate();
  if (p.degree() < 1) throw InvalidArgument("find_roots needs degree >= 1");
  const Real tol = ctx.tol();
  const Real separation = ctx.separation();
  long bits = ctx.mantissa_bits;
  for (int attempt = 0;; ++attempt) {
    try {
      PrecisionScope scope(bits);
      auto roots = solve_monic(p.to_complex(), tol, separation);
      for (auto& r : roots) r.value = r.value.rounded(ctx.mantissa_bits);
      return roots;
    } catch (const NonConvergence&) {
      if (attempt == kMaxDoublings) throw;
      bits *= 2;
    }
  }
}

}  // namespace intmult
