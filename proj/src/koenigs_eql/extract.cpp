#include <algorithm>

#include "intmult/errors.hpp"
#include "intmult/koenigs_eql/eql.hpp"
#include "intmult/numerics/roots.hpp"
#include "intmult/periodic/periodic.hpp"

namespace intmult {

namespace {

constexpr double kMarginFraction = 0.01;

// A forward image of a critical point, with the number of steps taken.
struct CriticalImage {
  SpherePoint point;
  int step;
};

bool infinity_is_critical(const RationalMap& f) {
  const int dn = f.num().degree(), dd = f.den().degree();
  if (dn != dd) return std::abs(dn - dd) >= 2;
  const ExactScalar c = f.num().leading() / f.den().leading();
  const ExactPolynomial rest = f.num() - c * f.den();
  return rest.is_zero() || f.degree() - rest.degree() >= 2;
}

std::vector<CriticalImage> critical_images(const RationalMap& f, int depth, const PrecisionContext& ctx) {
  std::vector<SpherePoint> crit;
  const ExactPolynomial w = f.num().derivative() * f.den() - f.num() * f.den().derivative();
  if (w.degree() >= 1) {
    for (const auto& r : find_roots(w, ctx)) crit.push_back(SpherePoint{r.value, false});
  }
  if (infinity_is_critical(f)) crit.push_back(SpherePoint::at_infinity());
  const SphereMap S(f);
  std::vector<CriticalImage> out;
  for (SpherePoint p : crit) {
    for (int k = 1; k <= depth; ++k) {
      p = S.apply(p);
      out.push_back({p, k});
    }
  }
  return out;
}

// Euclidean distance from z to the finite critical values of f^k for k <= max_step.
Real distance_to_critical_values(const Complex& z, const std::vector<CriticalImage>& images, int max_step) {
  Real d = Real::infinity();
  for (const auto& c : images) {
    if (c.step > max_step || c.point.infinite) continue;
    d = min(d, abs(c.point.z - z));
  }
  return d;
}

Real max1(const Real& x) { return x < Real(1L) ? Real(1L) : x; }

struct Sampled {
  std::vector<Complex> pts;
  Real max_dist;  // from the reference point
  Real min_dist;
};

Sampled measure(std::vector<Complex> pts, const Complex& ref) {
  Sampled s{std::move(pts), Real(0L), Real::infinity()};
  for (const auto& p : s.pts) {
    const Real d = abs(p - ref);
    s.max_dist = max(s.max_dist, d);
    s.min_dist = min(s.min_dist, d);
  }
  return s;
}

int winding(const std::vector<Complex>& curve, const Complex& p) {
  Real total(0L);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    total += arg((curve[(k + 1) % curve.size()] - p) / (curve[k] - p));
  }
  return static_cast<int>(std::lround(total.to_double() / (2 * 3.141592653589793)));
}

Disk enclosing(const std::vector<Complex>& pts) {
  Complex c(0L);
  for (const auto& p : pts) c += p;
  c = c / Real(static_cast<long>(pts.size()));
  Real r(0L);
  for (const auto& p : pts) r = max(r, abs(p - c));
  return Disk{c, r};
}

}  // namespace

Extraction extract_eql(const RationalMap& f, const ExtractOptions& opts, const PrecisionContext& ctx) {
  ctx.validate();
  if (f.degree() < 2) throw InvalidArgument("extract_eql needs degree >= 2");
  if (opts.p_search_max < 1 || opts.depth_max < 1 || opts.m_budget < 1 || opts.boundary_samples < 16) {
    throw InvalidArgument("extraction budgets must be positive (and at least 16 boundary samples)");
  }
  PrecisionScope scope(ctx.mantissa_bits);
  const int samples = opts.boundary_samples;
  auto fe = std::make_shared<RationalEvaluator>(f);
  const std::vector<CriticalImage> images = critical_images(f, opts.critical_depth, ctx);
  const Real sep = ctx.separation();

  // z1: repelling, finite cycle clear of the critical orbits; smallest period,
  // then largest |lambda|
  ExtractionTrace trace;
  Complex z1;
  for (int p = 1; p <= opts.p_search_max && trace.z1_period == 0; ++p) {
    const std::vector<PeriodicOrbit> orbits = period_p_points(f, p, ctx);
    const PeriodicOrbit* best = nullptr;
    for (const auto& o : orbits) {
      if (o.multiplicity != 1 || abs(o.multiplier) <= Real(1L) + sep) continue;
      bool ok = true;
      for (const auto& pt : o.points) {
        if (pt.infinite) ok = false;
        for (const auto& c : images) {
          if (ok && chordal_distance(pt, c.point) <= sep) ok = false;
        }
      }
      if (!ok) continue;
      if (!best || abs(o.multiplier) > abs(best->multiplier) * (Real(1L) + Real(1e-9))) best = &o;
    }
    if (!best) continue;
    trace.z1_period = p;
    trace.z1_multiplier = best->multiplier;
    // the cycle point with the most room before a critical value of f^p
    Real room(-1L);
    for (const auto& pt : best->points) {
      const Real d = distance_to_critical_values(pt.z, images, p);
      if (d > room) {
        room = d;
        z1 = pt.z;
      }
    }
  }
  if (trace.z1_period == 0) {
    throw SearchExhausted("no repelling cycle clear of the critical orbits with period <= " +
                          std::to_string(opts.p_search_max));
  }
  const int p = trace.z1_period;
  IterateEvaluator Fp(fe, p);
  for (int it = 0; it < 60; ++it) {
    const Jet2 j = Fp.jet(z1);
    const Complex dz = (j.v - z1) / (j.d1 - Complex(1L));
    z1 -= dz;
    if (abs(dz) <= exp2i(8 - ctx.mantissa_bits) * max1(abs(z1))) break;
  }
  const BranchDescriptor g1{z1, z1};
  auto g1_at = [&](const Complex& v) { return continue_inverse(Fp, g1, v).v; };
  auto boundary = [&](const Disk& D) {
    std::vector<Complex> b;
    for (int k = 0; k < samples; ++k) b.push_back(D.boundary_point(k, samples));
    return b;
  };
  auto map_all = [](const std::vector<Complex>& pts, const auto& g) {
    std::vector<Complex> out;
    out.reserve(pts.size());
    for (const auto& x : pts) out.push_back(g(x));
    return out;
  };

  // V1 = D(z1, r1) free of critical values of f^p with g1(V1) inside V1
  Real r1 = min(distance_to_critical_values(z1, images, p) / Real(2L), max1(abs(z1)));
  bool v1_ok = false;
  Real v1_margin;
  for (int attempt = 0; attempt < 30 && !v1_ok; ++attempt) {
    try {
      const Sampled s = measure(map_all(boundary(Disk{z1, r1}), g1_at), z1);
      v1_margin = r1 - s.max_dist;
      v1_ok = v1_margin > r1 * Real(kMarginFraction);
    } catch (const ContractionFailure&) {
      v1_ok = false;
    }
    if (!v1_ok) r1 = r1 * Real(0.7);
  }
  if (!v1_ok) throw VerificationFailure("no disk V1 about z1 = " + to_string(z1, 12) + " with g1(V1) inside V1");
  trace.V1 = Disk{z1, r1};
  trace.inclusions.push_back({"g1(V1) in V1", true, v1_margin});

  // breadth-first preimages of z1 until one lands in V1 away from z1
  const ComplexPolynomial num = f.num().to_complex();
  const ComplexPolynomial den = f.den().to_complex();
  std::vector<Complex> level{z1};
  std::optional<Complex> z2_pre;
  int ell = 0;
  long visited = 0;
  for (int depth = 1; depth <= opts.depth_max && !z2_pre; ++depth) {
    std::vector<Complex> next;
    for (const auto& y : level) {
      std::vector<Complex> c(std::max(num.degree(), den.degree()) + 1, Complex(0L));
      for (int k = 0; k <= num.degree(); ++k) c[k] += num.coefficients()[k];
      for (int k = 0; k <= den.degree(); ++k) c[k] -= y * den.coefficients()[k];
      while (c.size() > 1 && c.back().is_zero()) c.pop_back();
      if (c.size() < 2) continue;
      for (const auto& r : find_roots(ComplexPolynomial(c), ctx)) next.push_back(r.value);
    }
    visited += static_cast<long>(next.size());
    if (visited > opts.max_preimages) break;
    Real best_room(0L);
    for (const auto& x : next) {
      const Real d = abs(x - z1);
      const Real room = min(r1 - d, d);
      if (room > r1 * Real(0.05) && room > best_room) {
        best_room = room;
        z2_pre = x;
      }
    }
    ell = depth;
    level = std::move(next);
  }
  if (!z2_pre) {
    throw SearchExhausted("no preimage of z1 in V1 \\ {z1} up to depth " + std::to_string(opts.depth_max));
  }
  trace.preimage_depth = ell;
  trace.z2_pre = *z2_pre;
  IterateEvaluator Fl(fe, ell);
  const BranchDescriptor g2pre{z1, newton_solve(Fl, z1, *z2_pre)};
  auto g2_at = [&](const Complex& v) { return continue_inverse(Fl, g2pre, v).v; };

  // V = D(z1, r) free of critical values of f^l with g2(V) inside V1 \ {z1}
  Real r = min(r1, distance_to_critical_values(z1, images, std::max(ell, p)) * Real(0.9));
  bool v_ok = false;
  Sampled g2V;
  for (int attempt = 0; attempt < 30 && !v_ok; ++attempt) {
    try {
      g2V = measure(map_all(boundary(Disk{z1, r}), g2_at), z1);
      v_ok = g2V.max_dist < r1 * Real(1 - kMarginFraction) && g2V.min_dist > r1 * Real(kMarginFraction) &&
             winding(g2V.pts, z1) == 0;
    } catch (const ContractionFailure&) {
      v_ok = false;
    }
    if (!v_ok) r = r * Real(0.7);
  }
  if (!v_ok) throw VerificationFailure("no disk V about z1 with g2(V) inside V1 \\ {z1}");
  trace.inclusions.push_back({"g2(V) in V1 \\ {z1}", true, min(r1 - g2V.max_dist, g2V.min_dist)});
  const Disk V{z1, r};
  const Real margin = r * Real(kMarginFraction);

  // m1: W2 = g1^m1(g2(V)) inside V
  std::vector<Complex> w2 = g2V.pts;
  Sampled W2;
  for (int m = 1; m <= opts.m_budget && trace.m1 == 0; ++m) {
    w2 = map_all(w2, g1_at);
    W2 = measure(w2, z1);
    if (W2.max_dist < r - margin && W2.min_dist > margin && winding(w2, z1) == 0) trace.m1 = m;
  }
  if (trace.m1 == 0) throw VerificationFailure("W2 = g1^m1 g2(V) not inside V within the m1 budget");
  trace.inclusions.push_back({"W2 in V", true, r - W2.max_dist});

  // m2: W1 = g1^m2(V) inside V \ W2
  std::vector<Complex> w1 = boundary(V);
  Sampled W1;
  for (int m = 1; m <= opts.m_budget && trace.m2 == 0; ++m) {
    w1 = map_all(w1, g1_at);
    W1 = measure(w1, z1);
    if (W1.max_dist + margin < W2.min_dist) trace.m2 = m;
  }
  if (trace.m2 == 0) throw VerificationFailure("W1 = g1^m2(V) not clear of W2 within the m2 budget");
  trace.inclusions.push_back({"W1 in V \\ W2", true, W2.min_dist - W1.max_dist});
  trace.W1 = enclosing(w1);
  trace.W2 = enclosing(w2);
  trace.n1 = trace.m2 * p;
  trace.n2 = trace.m1 * p + ell;
  const int n = trace.n1 * trace.n2;

  // seed of g2 = h2^n1 at z1, h2 = g1^m1 o g2
  Complex s = z1;
  for (int k = 0; k < trace.n1; ++k) {
    s = g2_at(s);
    for (int m = 0; m < trace.m1; ++m) s = g1_at(s);
  }
  auto dyn = std::make_shared<IterateDynamics>(f, n, g1, BranchDescriptor{z1, s});

  EscapingQuadraticLike eql;
  eql.dynamics = dyn;
  eql.base_map = describe(f);
  eql.n = n;
  eql.V = V;
  eql.z1 = z1;
  eql.lambda1 = dyn->forward(z1).d1;
  // z2 by contraction from the seed image, then Newton on F(z) = z
  Complex z2 = s;
  for (int it = 0; it < 200; ++it) {
    const Complex next = dyn->branch(2, z2).v;
    const Real step = abs(next - z2);
    z2 = next;
    if (step <= exp2i(-ctx.mantissa_bits / 2) * max1(abs(z2))) break;
  }
  for (int it = 0; it < 8; ++it) {
    const Jet2 j = dyn->forward(z2);
    const Complex dz = (j.v - z2) / (j.d1 - Complex(1L));
    z2 -= dz;
    if (abs(dz) <= exp2i(8 - ctx.mantissa_bits) * max1(abs(z2))) break;
  }
  eql.z2 = z2;
  eql.lambda2 = dyn->forward(z2).d1;

  const EqlInvariantReport rep = check_invariants(eql, ctx, samples);
  if (!rep.ok) {
    throw VerificationFailure("extracted map fails its invariants: right inverse " + rep.right_inverse.to_string(6) +
                              ", fixed points " + rep.fixed_point.to_string(6) + ", margin " +
                              rep.containment_margin.to_string(6));
  }
  eql.containment_margin = rep.containment_margin;
  return {std::move(eql), std::move(trace)};
}

}  // namespace intmult
