#pragma once

#include <map>
#include <vector>

#include "json.hpp"
#include "intmult/maps/maps.hpp"
#include "intmult/numerics/precision.hpp"

namespace intmult {

// Point of the Riemann sphere.
struct SpherePoint {
  Complex z;
  bool infinite = false;

  static SpherePoint at_infinity() { return SpherePoint{Complex(0L), true}; }
  // Charts: w = z when |z| <= 1, w = 1/z otherwise (and at infinity).
  bool in_infinite_chart() const;
  Complex chart_coordinate() const;
  std::string to_string(int digits = 0) const;
};

Real chordal_distance(const SpherePoint& a, const SpherePoint& b);

struct PeriodicOrbit {
  int period = 1;
  std::vector<SpherePoint> points;  // in iteration order
  Complex multiplier;
  Real multiplier_residual;  // first-order error bound on the multiplier
  Real residual;             // max chordal distance between f(z_j) and z_(j+1)
  int multiplicity = 1;      // as a root of the period-p equation
};

struct MultiplierSpectrum {
  int map_degree = 0;
  std::map<int, std::vector<PeriodicOrbit>> by_period;
  // Periods where the sphere count sum_{q|p} q * #orbits(q) misses degree^p + 1,
  // which happens at parabolic coincidences (multiplier a root of unity).
  std::vector<int> flagged_periods;
};

// sum over q | p of q times the orbit multiplicities of period q.
long sphere_point_count(const MultiplierSpectrum& s, int p);

struct MultiplierValue {
  Complex value;
  Real residual;
};

// f evaluated on the sphere at the working precision, with derivatives in the
// charts of source and target.
class SphereMap {
 public:
  explicit SphereMap(const RationalMap& f);

  SpherePoint apply(const SpherePoint& p) const;
  // g = psi_target o f o psi_source^-1 at the chart coordinate of p, where the
  // target chart is the one chosen by f(p). Returns (g, g', g'').
  Jet2 chart_jet(const SpherePoint& p, bool target_infinite) const;
  int degree() const noexcept { return d_; }

 private:
  int d_;
  ComplexPolynomial num_, den_, rnum_, rden_;  // rnum(w) = w^d num(1/w)
};

// Orbits of exact period p of f on the sphere, including orbits through
// infinity. Sorted by |multiplier|, then its argument.
std::vector<PeriodicOrbit> period_p_points(const RationalMap& f, int p, const PrecisionContext& ctx,
                                           long degree_cap = kDefaultIterateDegreeCap);

// Product of chart derivatives along the orbit of z0 of length p.
MultiplierValue orbit_multiplier(const RationalMap& f, const SpherePoint& z0, int p, const PrecisionContext& ctx);
// Throws OrbitError when the orbit leaves every finite bound.
MultiplierValue orbit_multiplier(const MapEvaluator& f, const Complex& z0, int p, const PrecisionContext& ctx);

MultiplierSpectrum multiplier_spectrum(const RationalMap& f, int p_max, const PrecisionContext& ctx,
                                       long degree_cap = kDefaultIterateDegreeCap);

struct Box {
  double re_min = -2, re_max = 2, im_min = -2, im_max = 2;
};

// Newton from a grid_n x grid_n grid of seeds on F^p(z) - z. Best effort:
// returns deduplicated orbits of exact period p that converged.
std::vector<PeriodicOrbit> transcendental_periodic_search(const MapEvaluator& F, int p, const Box& box, int grid_n,
                                                          const PrecisionContext& ctx);

nlohmann::json orbit_to_json(const PeriodicOrbit& o);
// period, orbit_index, re_lambda, im_lambda, residual, multiplicity
std::string spectrum_to_csv(const MultiplierSpectrum& s);

}  // namespace intmult
