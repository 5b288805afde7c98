#include "intmult/koenigs_eql/koenigs.hpp"

#include <cmath>

#include "intmult/errors.hpp"

namespace intmult {

namespace {

Real max1(const Real& x) { return x < Real(1L) ? Real(1L) : x; }

// (P, P', P'') at t for P = sum c_k t^k
Jet2 eval_poly_jet(const std::vector<Complex>& c, const Complex& t) {
  Complex p(0L), d1(0L), d2(0L);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
    d2 = d2 * t + Complex(2L) * d1;
    d1 = d1 * t + p;
    p = p * t + c[k];
  }
  return Jet2{p, d1, d2};
}

std::vector<Complex> grid_points(const Disk& d, int count) {
  std::vector<Complex> g;
  for (int k = 0; k < count; ++k) {
    const Real s(0.3 * ((k % 3) + 1));
    g.push_back(d.center + Complex::polar(d.radius * s, Real(2L) * Real::pi() * Real(k) / Real(count)));
  }
  return g;
}

Complex polish_fixed_point(const MapEvaluator& F, Complex z) {
  for (int it = 0; it < 60; ++it) {
    const Jet2 j = F.jet(z);
    const Complex dz = (j.v - z) / (j.d1 - Complex(1L));
    z -= dz;
    if (abs(dz) <= exp2i(8 - Real::working_precision()) * max1(abs(z))) break;
  }
  return z;
}

}  // namespace

std::vector<Complex> koenigs_coefficients(const std::vector<Complex>& F_taylor, int order) {
  if (F_taylor.size() < 2) throw InvalidArgument("need at least the linear Taylor coefficient");
  order = std::min<int>(order, static_cast<int>(F_taylor.size()) - 1);
  const Complex& lambda = F_taylor[1];
  Series u = F_taylor;
  u.resize(order + 1);
  u[0] = Complex(0L);
  std::vector<Complex> c(order + 1, Complex(0L));
  if (order >= 1) c[1] = Complex(1L);
  // powers[k] = u^k truncated
  std::vector<Series> powers{Series(order + 1, Complex(0L)), u};
  powers[0][0] = Complex(1L);
  for (int k = 2; k <= order; ++k) powers.push_back(series_mul(powers.back(), u, order));
  Complex lambda_m = lambda;
  for (int m = 2; m <= order; ++m) {
    lambda_m *= lambda;
    Complex acc(0L);
    for (int k = 1; k < m; ++k) acc += c[k] * powers[k][m];
    c[m] = -acc / (lambda_m - lambda);
  }
  return c;
}

long KoenigsChart::guard_bits(int N) const {
  return 16 + static_cast<long>(std::ceil(N * std::log2(abs(lambda1_).to_double())));
}

Jet2 KoenigsChart::forward_at_depth(const Complex& z, int N) const {
  Jet2 out;
  {
    PrecisionScope hi(bits_ + guard_bits(N));
    Jet2 acc{z, Complex(1L), Complex(0L)};
    const BranchDescriptor g{z1_hi_, z1_hi_};
    for (int k = 0; k < N; ++k) acc = compose_jets(continue_inverse(*F_, g, acc.v), acc);
    const Jet2 P = eval_poly_jet(coeffs_, acc.v - z1_hi_);
    const Complex scale = pow(lambda1_, N);
    out = Jet2{scale * P.v, scale * P.d1 * acc.d1, scale * (P.d2 * acc.d1 * acc.d1 + P.d1 * acc.d2)};
  }
  return Jet2{out.v.rounded(bits_), out.d1.rounded(bits_), out.d2.rounded(bits_)};
}

Jet2 KoenigsChart::forward(const Complex& z) const {
  PrecisionScope scope(bits_);
  return forward_at_depth(z, N_);
}

Complex KoenigsChart::inverse(const Complex& zeta) const {
  PrecisionScope scope(bits_);
  if (zeta.is_zero()) return z1_;
  // pull zeta toward 0, invert the Taylor polynomial there, push forward
  const Real small = domain_.radius * Real(1e-3);
  int M = 0;
  Complex s = zeta;
  while (abs(s) > small && M < 4000) {
    s = s / lambda1_;
    ++M;
  }
  Complex t = s;
  for (int it = 0; it < 20; ++it) {
    const Jet2 P = eval_poly_jet(coeffs_, t);
    const Complex dt = (P.v - s) / P.d1;
    t -= dt;
    if (abs(dt) <= exp2i(4 - bits_) * abs(t)) break;
  }
  Complex x = z1_ + t;
  for (int k = 0; k < M; ++k) x = F_->jet(x).v;
  for (int it = 0; it < 40; ++it) {
    const Jet2 j = forward(x);
    const Complex dx = (j.v - zeta) / j.d1;
    x -= dx;
    if (!x.is_finite() || abs(x - domain_.center) > domain_.radius * Real(1.5)) break;
    if (abs(dx) <= exp2i(12 - bits_) * max1(abs(x))) return x;
  }
  throw NonConvergence("chart inversion failed at " + to_string(zeta, 12), -1.0);
}

KoenigsChart koenigs_chart(std::shared_ptr<const MapEvaluator> F, const Complex& z1, const Complex& lambda1,
                           const Disk& domain, const KoenigsOptions& opts, const PrecisionContext& ctx) {
  ctx.validate();
  if (opts.taylor_order < 1 || opts.N < 0 || opts.N_cap < 1 || opts.grid < 1) {
    throw InvalidArgument("Koenigs options out of range");
  }
  PrecisionScope scope(ctx.mantissa_bits);
  KoenigsChart c;
  c.F_ = std::move(F);
  c.bits_ = ctx.mantissa_bits;
  c.domain_ = domain;
  const Complex z = polish_fixed_point(*c.F_, z1);
  if (abs(c.F_->jet(z).v - z) > ctx.tol() * max1(abs(z)) || abs(z - z1) > ctx.separation() * max1(abs(z1))) {
    throw InvalidArgument("z1 = " + to_string(z1, 12) + " is not a fixed point");
  }
  c.z1_ = z;
  const std::vector<Complex> tay = c.F_->taylor(z, opts.taylor_order);
  c.lambda1_ = tay[1];
  if (abs(c.lambda1_ - lambda1) > ctx.separation() * max1(abs(lambda1))) {
    throw InvalidArgument("lambda1 = " + to_string(lambda1, 12) + " differs from F'(z1) = " + to_string(c.lambda1_, 12));
  }
  if (abs(c.lambda1_) <= Real(1L)) throw InvalidArgument("Koenigs chart needs a repelling fixed point");
  c.coeffs_ = koenigs_coefficients(tay, opts.taylor_order);

  // escalate N on the grid until the increments reach the target or stop
  // shrinking (rounding floor)
  const std::vector<Complex> grid = grid_points(domain, opts.grid);
  const Real target = exp2i(10 - ctx.mantissa_bits);
  std::vector<Complex> x = grid;
  std::vector<Complex> prev(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) prev[k] = grid[k] - c.z1_;  // phi_0 up to the polynomial
  for (std::size_t k = 0; k < grid.size(); ++k) prev[k] = eval_poly_jet(c.coeffs_, prev[k]).v;
  Real best_inc = Real::infinity();
  int best_N = 0;
  Complex scale(1L);
  const int cap = opts.N > 0 ? opts.N : opts.N_cap;
  int rising = 0;
  Complex z1_hi = c.z1_;
  for (int N = 1; N <= cap; ++N) {
    // the pulled-back grid is carried at the guarded precision of depth N
    PrecisionScope hi(ctx.mantissa_bits + c.guard_bits(N));
    z1_hi = polish_fixed_point(*c.F_, z1_hi);
    const BranchDescriptor g{z1_hi, z1_hi};
    scale *= c.lambda1_;
    Real inc(0L), size(0L);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      x[k] = continue_inverse(*c.F_, g, x[k]).v;
      const Complex phi = scale * eval_poly_jet(c.coeffs_, x[k] - z1_hi).v;
      inc = max(inc, abs(phi - prev[k]));
      size = max(size, abs(phi));
      prev[k] = phi;
    }
    inc = inc / max1(size);
    if (opts.N > 0) {
      best_inc = inc;
      best_N = N;
      continue;
    }
    if (inc < best_inc) {
      best_inc = inc;
      best_N = N;
      rising = 0;
    } else if (++rising >= 3) {
      break;
    }
    if (inc <= target) break;
  }
  if (opts.N == 0 && best_inc > ctx.tol()) {
    throw NonConvergence("Koenigs iterates did not settle within N = " + std::to_string(cap), best_inc.to_double());
  }
  c.N_ = best_N;
  c.increment_ = best_inc;
  {
    PrecisionScope hi(ctx.mantissa_bits + c.guard_bits(c.N_));
    c.z1_hi_ = polish_fixed_point(*c.F_, c.z1_);
  }

  // functional equation on g(grid), with F evaluated directly
  c.residual_ = Real(0L);
  const BranchDescriptor g{c.z1_, c.z1_};
  for (const auto& v : grid) {
    const Complex zz = continue_inverse(*c.F_, g, v).v;
    const Complex Fz = c.F_->jet(zz).v;
    c.residual_ = max(c.residual_, abs(c.forward_at_depth(Fz, c.N_).v - c.lambda1_ * c.forward_at_depth(zz, c.N_).v));
  }
  return c;
}

nlohmann::json chart_to_json(const KoenigsChart& chart) {
  return {{"z1", complex_to_json(chart.z1())},
          {"lambda1", complex_to_json(chart.lambda1())},
          {"N", chart.N()},
          {"taylor_order", chart.taylor_order()},
          {"domain", {{"center", complex_to_json(chart.domain().center)}, {"radius", chart.domain().radius.to_string()}}},
          {"increment", chart.increment().to_double()},
          {"residual", chart.residual().to_double()},
          {"bits", chart.bits()}};
}

}  // namespace intmult
