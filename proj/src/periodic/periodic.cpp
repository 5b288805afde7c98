#include "intmult/periodic/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "intmult/errors.hpp"
#include "intmult/numerics/roots.hpp"

namespace intmult {

namespace {

constexpr int kMaxDoublings = 3;

Real max1(const Real& x) { return x < Real(1L) ? Real(1L) : x; }

// Rounds to 9 decimals so nearly equal keys sort by the next key, stably.
double quantize(double x) {
  if (!std::isfinite(x)) return x;
  return std::round(x * 1e9) / 1e9;
}

double quantized_arg(const Complex& z) {
  double a = quantize(arg(z).to_double());
  if (a <= -3.141592653) a = -a;  // -pi and pi are the same direction
  return a;
}

std::vector<int> proper_divisors(int p) {
  std::vector<int> out;
  for (int q = 1; q < p; ++q) {
    if (p % q == 0) out.push_back(q);
  }
  return out;
}

bool point_less(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite != b.infinite) return b.infinite;
  if (a.infinite) return false;
  const double ar = quantize(a.z.re().to_double()), br = quantize(b.z.re().to_double());
  if (ar != br) return ar < br;
  return quantize(a.z.im().to_double()) < quantize(b.z.im().to_double());
}

bool orbit_less(const PeriodicOrbit& a, const PeriodicOrbit& b) {
  if (a.period != b.period) return a.period < b.period;
  const double am = quantize(abs(a.multiplier).to_double()), bm = quantize(abs(b.multiplier).to_double());
  if (am != bm) return am < bm;
  const double aa = quantized_arg(a.multiplier), ba = quantized_arg(b.multiplier);
  if (aa != ba) return aa < ba;
  return point_less(a.points.front(), b.points.front());
}

struct RootPoint {
  SpherePoint point;
  int multiplicity = 1;
  Real delta;  // position uncertainty in the affine coordinate
};

// Float evaluator of the homogeneous iterate: returns (A_p(z) - z B_p(z), derivative).
class PeriodEquation {
 public:
  PeriodEquation(const RationalMap& f, int p) : p_(p), d_(f.degree()) {
    for (int i = 0; i <= d_; ++i) {
      n_.push_back(f.num().coeff(i).to_complex());
      m_.push_back(f.den().coeff(i).to_complex());
    }
  }

  std::pair<Complex, Complex> operator()(const Complex& z) const {
    Complex X = z, Y(1L), dX(1L), dY(0L);
    std::vector<Complex> xp(d_ + 1), yp(d_ + 1);
    for (int step = 0; step < p_; ++step) {
      xp[0] = Complex(1L);
      yp[0] = Complex(1L);
      for (int i = 1; i <= d_; ++i) {
        xp[i] = xp[i - 1] * X;
        yp[i] = yp[i - 1] * Y;
      }
      Complex N(0L), D(0L), NX(0L), NY(0L), DX(0L), DY(0L);
      for (int i = 0; i <= d_; ++i) {
        const Complex mono = xp[i] * yp[d_ - i];
        N += n_[i] * mono;
        D += m_[i] * mono;
        if (i > 0) {
          const Complex t = Real(static_cast<long>(i)) * xp[i - 1] * yp[d_ - i];
          NX += n_[i] * t;
          DX += m_[i] * t;
        }
        if (i < d_) {
          const Complex t = Real(static_cast<long>(d_ - i)) * xp[i] * yp[d_ - i - 1];
          NY += n_[i] * t;
          DY += m_[i] * t;
        }
      }
      Complex ndX = NX * dX + NY * dY;
      Complex ndY = DX * dX + DY * dY;
      X = std::move(N);
      Y = std::move(D);
      dX = std::move(ndX);
      dY = std::move(ndY);
    }
    return {X - z * Y, dX - Y - z * dY};
  }

 private:
  int p_;
  int d_;
  std::vector<Complex> n_, m_;
};

std::vector<RootPoint> period_equation_roots(const RationalMap& f, int p, const ExactPolynomial& F, int inf_mult,
                                             const PrecisionContext& ctx) {
  std::vector<RootPoint> out;
  if (F.degree() >= 1) {
    const PeriodEquation eq(f, p);
    const ComplexPolynomial Fc = F.to_complex();
    const Real lead = abs(Fc.leading());
    const Real tol = ctx.tol();
    const int deg = F.degree();
    RootProblem problem;
    problem.degree = deg;
    problem.initial_radius = root_radius_bound(Fc);
    problem.evaluate = [&eq](const Complex& z) { return eq(z); };
    problem.residual = [&eq, lead](const Complex& z) { return abs(eq(z).first) / lead; };
    problem.residual_ok = [&eq, lead, tol, deg](const Complex& z) {
      return abs(eq(z).first) / lead <= tol * max1(pow(abs(z), static_cast<long>(deg)));
    };
    const auto approx = aberth_solve(problem);
    const auto roots = cluster_roots(approx, ctx.separation(), problem.residual);
    const Real ulp = exp2i(2 - Real::working_precision());
    for (const auto& r : roots) {
      RootPoint rp;
      rp.point = SpherePoint{r.value, false};
      rp.multiplicity = r.multiplicity;
      if (r.multiplicity == 1) {
        auto [v, dv] = eq(r.value);
        rp.delta = dv.is_zero() ? ctx.separation() * max1(abs(r.value)) : abs(v / dv);
      } else {
        rp.delta = ctx.separation() * max1(abs(r.value));
      }
      rp.delta = max(rp.delta, ulp * max1(abs(r.value)));
      out.push_back(std::move(rp));
    }
  }
  if (inf_mult > 0) {
    RootPoint rp;
    rp.point = SpherePoint::at_infinity();
    rp.multiplicity = inf_mult;
    rp.delta = Real(0L);
    out.push_back(std::move(rp));
  }
  return out;
}

// Chart-coordinate uncertainty from an affine one.
Real chart_delta(const SpherePoint& p, const Real& delta) {
  if (p.infinite) return delta;
  if (!p.in_infinite_chart()) return delta;
  return delta / norm(p.z);
}

MultiplierValue chart_product(const SphereMap& F, const std::vector<SpherePoint>& pts,
                              const std::vector<Real>& chart_deltas) {
  const std::size_t n = pts.size();
  std::vector<Jet2> jets;
  jets.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    jets.push_back(F.chart_jet(pts[j], pts[(j + 1) % n].in_infinite_chart()));
  }
  Complex lambda(1L);
  for (const auto& j : jets) lambda *= j.d1;
  Real err(0L);
  for (std::size_t j = 0; j < n; ++j) {
    Real term = abs(jets[j].d2) * chart_deltas[j];
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) term *= abs(jets[k].d1);
    }
    err += term;
  }
  err += exp2i(4 - Real::working_precision()) * Real(static_cast<long>(n)) * abs(lambda);
  return {lambda, err};
}

}  // namespace

bool SpherePoint::in_infinite_chart() const { return infinite || abs(z) > Real(1L); }

Complex SpherePoint::chart_coordinate() const {
  if (infinite) return Complex(0L);
  return in_infinite_chart() ? reciprocal(z) : z;
}

std::string SpherePoint::to_string(int digits) const { return infinite ? "inf" : intmult::to_string(z, digits); }

Real chordal_distance(const SpherePoint& a, const SpherePoint& b) {
  if (a.infinite && b.infinite) return Real(0L);
  if (a.infinite) return chordal_distance_to_infinity(b.z);
  if (b.infinite) return chordal_distance_to_infinity(a.z);
  return chordal_distance(a.z, b.z);
}

SphereMap::SphereMap(const RationalMap& f)
    : d_(f.degree()),
      num_(f.num().to_complex()),
      den_(f.den().to_complex()),
      rnum_(f.num().reversed(f.degree()).to_complex()),
      rden_(f.den().reversed(f.degree()).to_complex()) {}

SpherePoint SphereMap::apply(const SpherePoint& p) const {
  Complex top, bottom;
  if (!p.in_infinite_chart()) {
    top = num_.evaluate(p.z);
    bottom = den_.evaluate(p.z);
  } else {
    const Complex w = p.chart_coordinate();
    top = rnum_.evaluate(w);
    bottom = rden_.evaluate(w);
  }
  if (bottom.is_zero()) return SpherePoint::at_infinity();
  Complex v = top / bottom;
  if (!v.is_finite()) return SpherePoint::at_infinity();
  return SpherePoint{std::move(v), false};
}

Jet2 SphereMap::chart_jet(const SpherePoint& p, bool target_infinite) const {
  const bool src_inf = p.in_infinite_chart();
  const ComplexPolynomial& top = src_inf ? (target_infinite ? rden_ : rnum_) : (target_infinite ? den_ : num_);
  const ComplexPolynomial& bot = src_inf ? (target_infinite ? rnum_ : rden_) : (target_infinite ? num_ : den_);
  const Complex u = p.chart_coordinate();
  auto n = poly_eval_derivs(top, u, 2);
  auto d = poly_eval_derivs(bot, u, 2);
  Jet2 j;
  j.v = n[0] / d[0];
  j.d1 = (n[1] - j.v * d[1]) / d[0];
  j.d2 = (n[2] - Complex(2L) * j.d1 * d[1] - j.v * d[2]) / d[0];
  return j;
}

std::vector<PeriodicOrbit> period_p_points(const RationalMap& f, int p, const PrecisionContext& ctx,
                                           long degree_cap) {
  ctx.validate();
  if (p < 1) throw InvalidArgument("period must be >= 1");
  const auto [A, B] = homogeneous_iterate(f, p, degree_cap);
  const ExactPolynomial F = A - ExactPolynomial::identity() * B;
  if (F.is_zero()) throw InvalidArgument("f^" + std::to_string(p) + " is the identity");
  long total = 1;
  for (int i = 0; i < p; ++i) total *= f.degree();
  const int inf_mult = static_cast<int>(total + 1 - F.degree());

  long bits = ctx.mantissa_bits;
  for (int attempt = 0;; ++attempt) {
    try {
      PrecisionScope scope(bits);
      const PrecisionContext work{bits, ctx.convergence_tol};
      const SphereMap S(f);
      std::vector<RootPoint> roots = period_equation_roots(f, p, F, inf_mult, work);
      const Real sep = ctx.separation();

      // exact period p only
      std::vector<RootPoint> exact;
      for (auto& r : roots) {
        bool lower = false;
        for (int q : proper_divisors(p)) {
          SpherePoint x = r.point;
          for (int i = 0; i < q; ++i) x = S.apply(x);
          if (chordal_distance(x, r.point) < sep) {
            lower = true;
            break;
          }
        }
        if (!lower) exact.push_back(std::move(r));
      }
      std::sort(exact.begin(), exact.end(),
                [](const RootPoint& a, const RootPoint& b) { return point_less(a.point, b.point); });

      std::vector<bool> used(exact.size(), false);
      std::vector<PeriodicOrbit> orbits;
      for (std::size_t i0 = 0; i0 < exact.size(); ++i0) {
        if (used[i0]) continue;
        std::vector<std::size_t> idx{i0};
        used[i0] = true;
        for (int j = 1; j < p; ++j) {
          const SpherePoint next = S.apply(exact[idx.back()].point);
          std::size_t best = exact.size();
          Real best_d = Real::infinity();
          for (std::size_t k = 0; k < exact.size(); ++k) {
            if (used[k]) continue;
            Real dk = chordal_distance(next, exact[k].point);
            if (dk < best_d) {
              best_d = dk;
              best = k;
            }
          }
          if (best == exact.size() || !(best_d < sep)) {
            throw OrbitError("period-" + std::to_string(p) + " point " + exact[i0].point.to_string(12) +
                             " does not return to the computed roots: step " + std::to_string(j) + " lands at " +
                             next.to_string(12) + ", nearest root at chordal distance " + best_d.to_string(6));
          }
          used[best] = true;
          idx.push_back(best);
        }
        PeriodicOrbit orbit;
        orbit.period = p;
        orbit.multiplicity = exact[i0].multiplicity;
        std::vector<Real> deltas;
        for (std::size_t k : idx) {
          orbit.points.push_back(exact[k].point);
          deltas.push_back(chart_delta(exact[k].point, exact[k].delta));
        }
        const MultiplierValue mv = chart_product(S, orbit.points, deltas);
        orbit.multiplier = mv.value.rounded(ctx.mantissa_bits);
        orbit.multiplier_residual = mv.residual.rounded(ctx.mantissa_bits);
        Real res(0L);
        for (int j = 0; j < p; ++j) {
          res = max(res, chordal_distance(S.apply(orbit.points[j]), orbit.points[(j + 1) % p]));
        }
        orbit.residual = res.rounded(ctx.mantissa_bits);
        // start at the canonical smallest point
        auto it = std::min_element(orbit.points.begin(), orbit.points.end(), point_less);
        std::rotate(orbit.points.begin(), it, orbit.points.end());
        for (auto& pt : orbit.points) pt.z = pt.z.rounded(ctx.mantissa_bits);
        orbits.push_back(std::move(orbit));
      }
      std::sort(orbits.begin(), orbits.end(), orbit_less);
      return orbits;
    } catch (const NonConvergence&) {
      if (attempt == kMaxDoublings) throw;
      bits *= 2;
    } catch (const OrbitError&) {
      // ill-conditioned roots (clustered near the Julia set) can miss the
      // orbit match at this precision
      if (attempt == kMaxDoublings) throw;
      bits *= 2;
    }
  }
}

MultiplierValue orbit_multiplier(const RationalMap& f, const SpherePoint& z0, int p, const PrecisionContext& ctx) {
  ctx.validate();
  if (p < 1) throw InvalidArgument("period must be >= 1");
  PrecisionScope scope(ctx.mantissa_bits);
  const SphereMap S(f);
  std::vector<SpherePoint> pts{z0};
  for (int j = 1; j < p; ++j) pts.push_back(S.apply(pts.back()));
  const SpherePoint back = S.apply(pts.back());
  // periodicity defect in the chart of z0
  Real defect = back.in_infinite_chart() == z0.in_infinite_chart()
                    ? abs(back.chart_coordinate() - z0.chart_coordinate())
                    : chordal_distance(back, z0);
  std::vector<Real> deltas;
  for (const auto& pt : pts) {
    deltas.push_back(max(defect, exp2i(2 - ctx.mantissa_bits) * max1(abs(pt.chart_coordinate()))));
  }
  return chart_product(S, pts, deltas);
}

MultiplierValue orbit_multiplier(const MapEvaluator& f, const Complex& z0, int p, const PrecisionContext& ctx) {
  ctx.validate();
  if (p < 1) throw InvalidArgument("period must be >= 1");
  PrecisionScope scope(ctx.mantissa_bits);
  const Real guard = exp2i(ctx.mantissa_bits + 64);
  std::vector<Jet2> jets;
  Complex z = z0;
  for (int j = 0; j < p; ++j) {
    jets.push_back(f.jet(z));
    z = jets.back().v;
    if (!z.is_finite() || abs(z) > guard) {
      throw OrbitError("orbit of " + to_string(z0, 12) + " escapes at step " + std::to_string(j + 1));
    }
  }
  const Real delta = max(abs(z - z0), exp2i(2 - ctx.mantissa_bits) * max1(abs(z0)));
  Complex lambda(1L);
  for (const auto& j : jets) lambda *= j.d1;
  Real err(0L);
  for (std::size_t j = 0; j < jets.size(); ++j) {
    Real term = abs(jets[j].d2) * delta;
    for (std::size_t k = 0; k < jets.size(); ++k) {
      if (k != j) term *= abs(jets[k].d1);
    }
    err += term;
  }
  err += exp2i(4 - ctx.mantissa_bits) * Real(static_cast<long>(p)) * abs(lambda);
  return {lambda, err};
}

MultiplierSpectrum multiplier_spectrum(const RationalMap& f, int p_max, const PrecisionContext& ctx,
                                       long degree_cap) {
  if (p_max < 1) throw InvalidArgument("p_max must be >= 1");
  MultiplierSpectrum s;
  s.map_degree = f.degree();
  for (int p = 1; p <= p_max; ++p) s.by_period[p] = period_p_points(f, p, ctx, degree_cap);
  long total = 1;
  for (int p = 1; p <= p_max; ++p) {
    total *= f.degree();
    if (sphere_point_count(s, p) != total + 1) s.flagged_periods.push_back(p);
  }
  return s;
}

long sphere_point_count(const MultiplierSpectrum& s, int p) {
  long count = 0;
  for (int q = 1; q <= p; ++q) {
    if (p % q != 0) continue;
    auto it = s.by_period.find(q);
    if (it == s.by_period.end()) throw InvalidArgument("spectrum lacks period " + std::to_string(q));
    for (const auto& o : it->second) count += static_cast<long>(q) * o.multiplicity;
  }
  return count;
}

namespace {

// F^p(z) - z and its derivative.
std::pair<Complex, Complex> iterate_defect(const MapEvaluator& F, const Complex& z, int p) {
  Complex x = z, dx(1L);
  for (int j = 0; j < p; ++j) {
    const Jet2 jt = F.jet(x);
    dx = dx * jt.d1;
    x = jt.v;
    if (!x.is_finite()) break;
  }
  return {x - z, dx - Complex(1L)};
}

Complex iterate(const MapEvaluator& F, Complex z, int n) {
  for (int j = 0; j < n; ++j) z = F(z);
  return z;
}

}  // namespace

std::vector<PeriodicOrbit> transcendental_periodic_search(const MapEvaluator& F, int p, const Box& box, int grid_n,
                                                          const PrecisionContext& ctx) {
  ctx.validate();
  if (grid_n < 2) throw InvalidArgument("grid_n must be >= 2");
  if (p < 1) throw InvalidArgument("period must be >= 1");
  PrecisionScope scope(ctx.mantissa_bits);
  const Real tol = ctx.tol();
  const Real sep = ctx.separation();
  const double slack = 1e-9;

  std::vector<Complex> found;
  for (int i = 0; i < grid_n; ++i) {
    for (int k = 0; k < grid_n; ++k) {
      Complex z(box.re_min + (box.re_max - box.re_min) * i / (grid_n - 1),
                box.im_min + (box.im_max - box.im_min) * k / (grid_n - 1));
      bool converged = false;
      for (int it = 0; it < 100 && z.is_finite(); ++it) {
        auto [g, dg] = iterate_defect(F, z, p);
        if (!g.is_finite() || dg.is_zero()) break;
        const Complex step = g / dg;
        z -= step;
        if (abs(step) <= tol * max1(abs(z))) {
          converged = true;
          break;
        }
      }
      if (!converged || !z.is_finite()) continue;
      for (int polish = 0; polish < 2; ++polish) {
        auto [g, dg] = iterate_defect(F, z, p);
        if (dg.is_zero()) break;
        z -= g / dg;
      }
      const double re = z.re().to_double(), im = z.im().to_double();
      if (re < box.re_min - slack || re > box.re_max + slack || im < box.im_min - slack ||
          im > box.im_max + slack) {
        continue;
      }
      if (abs(iterate_defect(F, z, p).first) > tol * max1(abs(z))) continue;
      bool dup = false;
      for (const auto& y : found) {
        if (abs(y - z) < sep * max1(abs(z))) {
          dup = true;
          break;
        }
      }
      if (!dup) found.push_back(z);
    }
  }

  std::vector<PeriodicOrbit> orbits;
  std::vector<bool> used(found.size(), false);
  auto cless = [](const Complex& a, const Complex& b) { return point_less({a, false}, {b, false}); };
  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cless(found[a], found[b]); });
  for (std::size_t oi : order) {
    if (used[oi]) continue;
    used[oi] = true;
    const Complex z = found[oi];
    bool lower = false;
    for (int q : proper_divisors(p)) {
      if (abs(iterate(F, z, q) - z) < sep * max1(abs(z))) lower = true;
    }
    if (lower) continue;
    std::vector<Complex> pts{z};
    for (int j = 1; j < p; ++j) pts.push_back(F(pts.back()));
    for (std::size_t k = 0; k < found.size(); ++k) {
      for (const auto& q : pts) {
        if (!used[k] && abs(found[k] - q) < sep * max1(abs(q))) used[k] = true;
      }
    }
    bool seen = false;
    for (const auto& o : orbits) {
      for (const auto& q : o.points) {
        if (abs(q.z - z) < sep * max1(abs(z))) seen = true;
      }
    }
    if (seen) continue;
    PeriodicOrbit orbit;
    orbit.period = p;
    const MultiplierValue mv = orbit_multiplier(F, z, p, ctx);
    orbit.multiplier = mv.value;
    orbit.multiplier_residual = mv.residual;
    Real res(0L);
    for (int j = 0; j < p; ++j) res = max(res, abs(F(pts[j]) - pts[(j + 1) % p]));
    orbit.residual = res;
    std::vector<Complex> rot = pts;
    auto it = std::min_element(rot.begin(), rot.end(), cless);
    std::rotate(rot.begin(), it, rot.end());
    for (auto& q : rot) orbit.points.push_back(SpherePoint{q, false});
    orbits.push_back(std::move(orbit));
  }
  std::sort(orbits.begin(), orbits.end(), orbit_less);
  return orbits;
}

nlohmann::json orbit_to_json(const PeriodicOrbit& o) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& pt : o.points) {
    if (pt.infinite) pts.push_back("inf");
    else pts.push_back({pt.z.re().to_string(), pt.z.im().to_string()});
  }
  return {{"period", o.period},
          {"points", pts},
          {"multiplier", {o.multiplier.re().to_string(), o.multiplier.im().to_string()}},
          {"multiplier_residual", o.multiplier_residual.to_double()},
          {"residual", o.residual.to_double()},
          {"multiplicity", o.multiplicity}};
}

std::string spectrum_to_csv(const MultiplierSpectrum& s) {
  std::ostringstream os;
  os << "period,orbit_index,re_lambda,im_lambda,residual,multiplicity\n";
  for (const auto& [p, orbits] : s.by_period) {
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const auto& o = orbits[i];
      os << p << ',' << i << ',' << o.multiplier.re().to_string(17) << ',' << o.multiplier.im().to_string(17) << ','
         << o.multiplier_residual.to_string(6) << ',' << o.multiplicity << '\n';
    }
  }
  return os.str();
}

}  // namespace intmult
