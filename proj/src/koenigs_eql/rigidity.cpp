#include "intmult/koenigs_eql/rigidity.hpp"

#include <cmath>

#include "intmult/errors.hpp"

namespace intmult {

namespace {

Real max1(const Real& x) { return x < Real(1L) ? Real(1L) : x; }

// forward map of the dynamics as a MapEvaluator, for the chart
class DynamicsEvaluator : public MapEvaluator {
 public:
  DynamicsEvaluator(std::shared_ptr<const EqlDynamics> d, std::string desc)
      : d_(std::move(d)), description_(std::move(desc)) {}
  Jet2 jet(const Complex& z) const override { return d_->forward(z); }
  std::vector<Complex> taylor(const Complex& z, int order) const override { return d_->forward_taylor(z, order); }
  const std::string& description() const override { return description_; }

 private:
  std::shared_ptr<const EqlDynamics> d_;
  std::string description_;
};

// sample radii and angle count for interior grids
constexpr double kRadii[] = {0.3, 0.6, 0.9};

}  // namespace

const KoenigsChart& NormalizedEql::chart() const {
  if (!chart_) throw InvalidArgument("first branch is already linear; no chart was built");
  return *chart_;
}

Complex NormalizedEql::lambda1() const { return pow(eql_.lambda1, power_); }

Jet2 NormalizedEql::phi(const Complex& x) const {
  if (!chart_) return Jet2{x - eql_.z1, Complex(1L), Complex(0L)};
  return chart_->forward(x);
}

Complex NormalizedEql::to_base(const Complex& zeta) const {
  if (!chart_) return zeta + eql_.z1;
  return chart_->inverse(zeta);
}

Jet2 NormalizedEql::base_forward(const Complex& x) const {
  Jet2 acc{x, Complex(1L), Complex(0L)};
  for (int k = 0; k < power_; ++k) acc = compose_jets(eql_.dynamics->forward(acc.v), acc);
  return acc;
}

std::pair<Complex, Jet2> NormalizedEql::g2_at_base(const Complex& x) const {
  const Jet2 px = phi(x);
  Jet2 g{x, Complex(1L), Complex(0L)};
  for (int k = 0; k < power_; ++k) g = compose_jets(eql_.dynamics->branch(2, g.v), g);
  const Jet2 py = phi(g.v);
  // phi o g2 o psi, with psi the local inverse of phi at phi(x)
  const Jet2 psi = inverse_jet(x, px);
  return {px.v, compose_jets(py, compose_jets(g, psi))};
}

Jet2 NormalizedEql::g2(const Complex& zeta) const { return g2_at_base(to_base(zeta)).second; }

Complex NormalizedEql::v_point(double s, long k, long count) const {
  return Disk{eql_.V.center, eql_.V.radius * Real(s)}.boundary_point(k, count);
}

Real NormalizedEql::v_radius(int samples) const {
  Real r(0L);
  for (int k = 0; k < samples; ++k) r = max(r, abs(phi(v_point(1.0, k, samples)).v));
  return r;
}

NormalizedEql NormalizedEql::second_iterate() const {
  NormalizedEql ne = *this;
  ne.power_ = 2 * power_;
  return ne;
}

NormalizedEql normalize_to_koenigs(const EscapingQuadraticLike& eql, const KoenigsOptions& opts,
                                   const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionScope scope(ctx.mantissa_bits);
  NormalizedEql ne;
  ne.eql_ = eql;
  if (!eql.dynamics->linear_first_branch()) {
    auto F = std::make_shared<DynamicsEvaluator>(eql.dynamics, eql.base_map);
    ne.chart_ = std::make_shared<KoenigsChart>(koenigs_chart(F, eql.z1, eql.lambda1, eql.V, opts, ctx));
  }
  return ne;
}

NormalizationReport check_normalization(const NormalizedEql& ne, int samples, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionScope scope(ctx.mantissa_bits);
  const EqlDynamics& dyn = *ne.eql().dynamics;
  const Complex lambda = ne.eql().lambda1;
  NormalizationReport r;
  r.linearity = Real(0L);
  r.hausdorff = Real(0L);
  for (double s : kRadii) {
    for (int k = 0; k < samples; ++k) {
      const Complex v = ne.v_point(s, k, samples);
      const Complex z = dyn.branch(1, v).v;  // in U1, f1(z) = v
      r.linearity = max(r.linearity, abs(ne.phi(v).v - lambda * ne.phi(z).v));
    }
  }
  for (int k = 0; k < samples; ++k) {
    const Complex v = ne.v_point(1.0, k, samples);
    r.hausdorff = max(r.hausdorff, abs(ne.phi(dyn.branch(1, v).v).v - ne.phi(v).v / lambda));
  }
  r.z1_image = abs(ne.phi(ne.eql().z1).v);
  return r;
}

std::vector<WnSample> wn_sequence(const NormalizedEql& ne, int n_max, const PrecisionContext& ctx) {
  ctx.validate();
  if (n_max < 2) throw InvalidArgument("n_max must be at least 2");
  PrecisionScope scope(ctx.mantissa_bits);
  const Complex lambda = ne.lambda1();
  const Real step_tol = exp2i(-ctx.mantissa_bits / 2);
  const Real floor_tol = exp2i(2 - ctx.mantissa_bits);
  std::vector<WnSample> out;
  Complex lambda_pow(1L);  // lambda^(n-1)
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) lambda_pow *= lambda;
    WnSample s;
    s.n = n;
    // w = g2(g1^(n-1)(w)), with g1 = division by lambda in the chart. Settled
    // once a step is below 2^(-bits/2); then run on to the rounding floor.
    Complex w(0L);
    Real prev_step = Real::infinity();
    int grew = 0;
    bool settled = false;
    for (int it = 1; it <= 10000; ++it) {
      const Complex next = ne.g2(w / lambda_pow).v;
      const Real step = abs(next - w);
      s.iterations = it;
      if (settled && step >= prev_step) break;  // stagnated at the floor
      w = next;
      if (step <= step_tol * max1(abs(w))) settled = true;
      if (step <= floor_tol * max1(abs(w))) break;
      if (!settled && step > prev_step) {
        if (++grew > 5) break;
      } else {
        grew = 0;
      }
      prev_step = step;
    }
    if (!settled) {
      throw ContractionFailure("fixed-point iteration for w_" + std::to_string(n) + " did not contract");
    }
    // one more evaluation at the settled point for the derivative
    const Jet2 J = ne.g2(w / lambda_pow);
    s.w_n = w;
    s.fixed_residual = abs(J.v - w);
    s.rho_n = lambda_pow / J.d1;

    // base orbit x_0 = psi(w), x_j = psi(w / lambda^(n-j)) for j >= 1
    std::vector<Complex> orbit;
    orbit.push_back(ne.to_base(w));
    Complex lp = lambda_pow;
    for (int j = 1; j < n; ++j) {
      orbit.push_back(ne.to_base(w / lp));
      lp /= lambda;
    }
    s.rho_orbit = Complex(1L);
    s.orbit_residual = Real(0L);
    for (std::size_t j = 0; j < orbit.size(); ++j) {
      const Jet2 F = ne.base_forward(orbit[j]);
      s.rho_orbit *= F.d1;
      s.orbit_residual = max(s.orbit_residual, abs(F.v - orbit[(j + 1) % orbit.size()]));
    }
    s.rho_residual = abs(s.rho_n - s.rho_orbit) / max1(abs(s.rho_n));
    // x_0 lies in U2 and the rest in U1, so separation from x_0 gives period n
    s.exact_period = true;
    for (std::size_t j = 1; j < orbit.size(); ++j) {
      if (abs(orbit[j] - orbit[0]) <= ctx.separation() * max1(abs(orbit[0]))) s.exact_period = false;
    }
    out.push_back(std::move(s));
  }
  return out;
}

AsymptoticFit fit_ab(const NormalizedEql& ne, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionScope scope(ctx.mantissa_bits);
  const Jet2 J = ne.g2(Complex(0L));
  AsymptoticFit f;
  f.alpha = J.v;
  f.beta = f.alpha * J.d1;
  f.a = reciprocal(J.d1);
  f.b = -f.alpha * J.d2 / (J.d1 * J.d1);
  return f;
}

ClaimReport verify_claim_recurrence(const std::vector<WnSample>& samples, const Complex& lambda1, const Complex& a,
                                    const Complex& b, const Real& tol) {
  if (samples.size() < 4) throw InvalidArgument("claim check needs at least 4 samples");
  ClaimReport r;
  const long bits = Real::working_precision();
  const Complex lm1 = lambda1 - Complex(1L);
  r.overall_max = Real(0L);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const Complex& p = samples[i].rho_n;
    const Complex& q = samples[i + 1].rho_n;
    r.residuals.push_back(abs(lambda1 * p - q - lm1 * b));
    // rounding, or the dual-route disagreement when the rho are less accurate
    const Real rel = max(exp2i(10 - bits), Real(2L) * max(samples[i].rho_residual, samples[i + 1].rho_residual));
    r.floors.push_back(rel * (abs(lambda1) * abs(p) + abs(q) + abs(lm1) * abs(b)));
    r.overall_max = max(r.overall_max, r.residuals.back());
  }
  for (const auto& s : samples) {
    r.epsilons.push_back(abs(s.rho_n - a * pow(lambda1, s.n - 1) - b));
  }
  const std::size_t m = r.residuals.size();
  r.trailing_start = (m - 1) / 2;
  r.trailing_max = Real(0L);
  r.holds = true;
  for (std::size_t i = r.trailing_start; i < m; ++i) {
    r.trailing_max = max(r.trailing_max, r.residuals[i]);
    if (r.residuals[i] > tol + r.floors[i]) r.holds = false;
  }
  // epsilon decay: compare the trailing half against the leading half, with
  // trailing values at their own rounding floor counted as decayed
  const std::size_t e_start = (r.epsilons.size() - 1) / 2;
  Real lead(0L), trail(0L);
  bool trail_at_floor = true;
  for (std::size_t i = 0; i < r.epsilons.size(); ++i) {
    if (i < e_start) {
      lead = max(lead, r.epsilons[i]);
    } else {
      trail = max(trail, r.epsilons[i]);
      const Real rel = max(exp2i(10 - bits), Real(2L) * samples[i].rho_residual);
      const Real floor = rel * (abs(samples[i].rho_n) + abs(b)) + tol;
      if (r.epsilons[i] > floor) trail_at_floor = false;
    }
  }
  r.eps_decays = trail < lead || trail_at_floor;
  return r;
}

OdeReport ode_residual(const NormalizedEql& ne, const AsymptoticFit& fit, int n_samples, const PrecisionContext& ctx) {
  ctx.validate();
  if (n_samples < 1) throw InvalidArgument("need at least one sample");
  PrecisionScope scope(ctx.mantissa_bits);
  OdeReport r;
  r.residual = Real(0L);
  r.min_ratio = Real::infinity();
  for (double s : kRadii) {
    for (int k = 0; k < n_samples; ++k) {
      // z = g2(w) lies in U2 with f2(z) = w
      const auto [w, J] = ne.g2_at_base(ne.v_point(s, k, n_samples));
      const Complex& z = J.v;
      const Complex ratio = w / z;
      const Real res = abs(reciprocal(J.d1) - fit.a - fit.b * ratio);
      if (res > r.residual || r.samples == 0) {
        r.residual = max(r.residual, res);
        r.worst_point = z;
      }
      r.min_ratio = min(r.min_ratio, abs(ratio));
      ++r.samples;
    }
  }
  return r;
}

SecondIterateReport second_iterate_check(const NormalizedEql& ne, const AsymptoticFit& fit, int n_samples,
                                         const PrecisionContext& ctx) {
  ctx.validate();
  if (n_samples < 1) throw InvalidArgument("need at least one sample");
  PrecisionScope scope(ctx.mantissa_bits);
  const NormalizedEql ne2 = ne.second_iterate();
  const AsymptoticFit fit2 = fit_ab(ne2, ctx);
  SecondIterateReport r;
  r.a_hat = fit2.a;
  r.b_hat = fit2.b;
  r.defect = abs(fit2.b - fit.b * fit.b);
  r.diamond_residual = Real(0L);
  // (f2 o f2)'(z) = f2'(y) f2'(z) with y = f2(z), w = f2(y), against the
  // fitted relation of the second iterate
  const Complex ab = fit.a * fit.b;
  const Complex aa = fit.a * fit.a, bb = fit.b * fit.b;
  for (double s : kRadii) {
    for (int k = 0; k < n_samples; ++k) {
      const auto [w, Y] = ne.g2_at_base(ne.v_point(s, k, n_samples));
      const Complex& y = Y.v;
      const Complex z = ne.g2(y).v;
      const Complex lhs = aa + ab * y / z + ab * w / y + bb * w / z;
      r.diamond_residual = max(r.diamond_residual, abs(lhs - fit2.a - fit2.b * w / z));
    }
  }
  return r;
}

AffinityVerdict affinity_test(const NormalizedEql& ne, const Real& tol, int n_samples, const PrecisionContext& ctx) {
  ctx.validate();
  if (n_samples < 1) throw InvalidArgument("need at least one sample");
  PrecisionScope scope(ctx.mantissa_bits);
  AffinityVerdict v;
  v.tol = tol;
  v.radius = ne.v_radius();
  const AsymptoticFit fit = fit_ab(ne, ctx);
  // fixed point of f2 in the chart
  Complex z2 = ne.phi(ne.eql().z2).v;
  for (int it = 0; it < 200; ++it) {
    const Complex next = ne.g2(z2).v;
    const Real step = abs(next - z2);
    z2 = next;
    if (step <= exp2i(8 - ctx.mantissa_bits) * max1(abs(z2))) break;
  }
  v.sup_defect = Real(0L);
  for (double s : kRadii) {
    for (int k = 0; k < n_samples; ++k) {
      const auto [w, J] = ne.g2_at_base(ne.v_point(s, k, n_samples));
      v.sup_defect = max(v.sup_defect, abs(w - (z2 + fit.a * (J.v - z2))));
    }
  }
  v.affine_conjugate = v.sup_defect < tol * v.radius;
  return v;
}

nlohmann::json wn_to_json(const WnSample& s) {
  return {{"n", s.n},
          {"w_n", complex_to_json(s.w_n)},
          {"rho_n", complex_to_json(s.rho_n)},
          {"rho_orbit", complex_to_json(s.rho_orbit)},
          {"rho_residual", s.rho_residual.to_double()},
          {"fixed_residual", s.fixed_residual.to_double()},
          {"orbit_residual", s.orbit_residual.to_double()},
          {"iterations", s.iterations},
          {"exact_period", s.exact_period}};
}

nlohmann::json fit_to_json(const AsymptoticFit& f) {
  return {{"alpha", complex_to_json(f.alpha)},
          {"beta", complex_to_json(f.beta)},
          {"a", complex_to_json(f.a)},
          {"b", complex_to_json(f.b)}};
}

nlohmann::json claim_to_json(const ClaimReport& r) {
  auto arr = [](const std::vector<Real>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(x.to_double());
    return a;
  };
  return {{"residuals", arr(r.residuals)},
          {"epsilons", arr(r.epsilons)},
          {"floors", arr(r.floors)},
          {"trailing_start", r.trailing_start},
          {"trailing_max", r.trailing_max.to_double()},
          {"overall_max", r.overall_max.to_double()},
          {"holds", r.holds},
          {"eps_decays", r.eps_decays}};
}

nlohmann::json ode_to_json(const OdeReport& r) {
  return {{"residual", r.residual.to_double()},
          {"worst_point", complex_to_json(r.worst_point)},
          {"min_ratio", r.min_ratio.to_double()},
          {"samples", r.samples}};
}

nlohmann::json second_iterate_to_json(const SecondIterateReport& r) {
  return {{"a_hat", complex_to_json(r.a_hat)},
          {"b_hat", complex_to_json(r.b_hat)},
          {"defect", r.defect.to_double()},
          {"diamond_residual", r.diamond_residual.to_double()}};
}

nlohmann::json affinity_to_json(const AffinityVerdict& v) {
  return {{"affine_conjugate", v.affine_conjugate},
          {"sup_defect", v.sup_defect.to_double()},
          {"radius", v.radius.to_double()},
          {"tol", v.tol.to_double()}};
}

}  // namespace intmult
