#pragma once

#include <optional>

#include "intmult/koenigs_eql/koenigs.hpp"

namespace intmult {

// An escaping quadratic-like map seen in the Koenigs coordinate of z1, where
// f1(zeta) = lambda1 zeta and z1 sits at 0. `power` 2 gives the second
// iterate f^2 : g1(U1) u g2(U2) -> V with branches g1 o g1 and g2 o g2.
class NormalizedEql {
 public:
  const EscapingQuadraticLike& eql() const noexcept { return eql_; }
  bool has_chart() const noexcept { return chart_ != nullptr; }
  const KoenigsChart& chart() const;
  int power() const noexcept { return power_; }
  Complex lambda1() const;

  // chart coordinate of a base point and back
  Jet2 phi(const Complex& x) const;
  Complex to_base(const Complex& zeta) const;

  // g2 in the chart at zeta
  Jet2 g2(const Complex& zeta) const;
  // (zeta, g2 jet at zeta) for zeta = phi(base point)
  std::pair<Complex, Jet2> g2_at_base(const Complex& x) const;
  // forward map of the (iterated) quadratic-like map at a base point
  Jet2 base_forward(const Complex& x) const;

  // base point of V at relative radius s in (0, 1] and angle index k / count
  Complex v_point(double s, long k, long count) const;
  // max |phi(v)| over `samples` boundary points of V
  Real v_radius(int samples = 64) const;

  NormalizedEql second_iterate() const;

 private:
  friend NormalizedEql normalize_to_koenigs(const EscapingQuadraticLike&, const KoenigsOptions&,
                                            const PrecisionContext&);
  EscapingQuadraticLike eql_;
  std::shared_ptr<const KoenigsChart> chart_;  // null: f1 already linear
  int power_ = 1;
};

struct NormalizationReport {
  Real linearity;  // sup |f1(zeta) - lambda1 zeta| on U1 samples
  Real hausdorff;  // sup over boundary samples of |phi(g1(v)) - phi(v)/lambda1|
  Real z1_image;   // |phi(z1)|
};

NormalizedEql normalize_to_koenigs(const EscapingQuadraticLike& eql, const KoenigsOptions& opts,
                                   const PrecisionContext& ctx);
NormalizationReport check_normalization(const NormalizedEql& ne, int samples, const PrecisionContext& ctx);

struct WnSample {
  int n = 1;
  Complex w_n;
  Complex rho_n;             // lambda1^(n-1) f2'(w_n)
  Complex rho_orbit;         // product of F' along the base orbit
  Real rho_residual;          // |rho_n - rho_orbit| / max(1, |rho_n|)
  Real fixed_residual;       // |g2(g1^(n-1)(w_n)) - w_n|
  Real orbit_residual;       // max one-step |F(x_j) - x_(j+1)| along the base orbit
  int iterations = 0;
  bool exact_period = false;  // x_0 separated from every later orbit point
};

// Throws ContractionFailure when the fixed-point iteration does not contract
// and InvalidArgument when n_max < 2.
std::vector<WnSample> wn_sequence(const NormalizedEql& ne, int n_max, const PrecisionContext& ctx);

struct AsymptoticFit {
  Complex alpha, beta, a, b;
};

// alpha = g2(0), beta = alpha g2'(0), a = f2'(alpha) = 1/g2'(0),
// b = beta f2''(alpha) = -alpha g2''(0) / g2'(0)^2.
AsymptoticFit fit_ab(const NormalizedEql& ne, const PrecisionContext& ctx);

struct ClaimReport {
  std::vector<Real> residuals;  // |lambda1 rho_n - rho_(n+1) - (lambda1 - 1) b|, n = first .. last-1
  std::vector<Real> epsilons;   // |rho_n - a lambda1^(n-1) - b|
  std::vector<Real> floors;     // accuracy floor of each residual (rounding or rho_residual)
  std::size_t trailing_start = 0;
  Real trailing_max;            // max residual over the trailing half
  Real overall_max;
  bool holds = false;           // trailing residuals below tol + floor
  bool eps_decays = false;      // max trailing |eps| < max leading |eps| (or both at the floor)
};

// Throws InvalidArgument with fewer than 4 samples.
ClaimReport verify_claim_recurrence(const std::vector<WnSample>& samples, const Complex& lambda1, const Complex& a,
                                    const Complex& b, const Real& tol);

struct OdeReport {
  Real residual;  // max |f2'(z) - a - b f2(z)/z|
  Complex worst_point;
  Real min_ratio;  // min |f2(z)/z| over the samples
  int samples = 0;
};

OdeReport ode_residual(const NormalizedEql& ne, const AsymptoticFit& fit, int n_samples, const PrecisionContext& ctx);

struct SecondIterateReport {
  Complex a_hat, b_hat;
  Real defect;            // |b_hat - b^2|
  Real diamond_residual;  // sup of both sides' difference in the combined relation on g2(U2)
};

SecondIterateReport second_iterate_check(const NormalizedEql& ne, const AsymptoticFit& fit, int n_samples,
                                         const PrecisionContext& ctx);

struct AffinityVerdict {
  bool affine_conjugate = false;
  Real sup_defect;  // sup |f2(z) - (z2 + a (z - z2))| over U2 samples
  Real radius;      // radius of V in the chart
  Real tol;
};

AffinityVerdict affinity_test(const NormalizedEql& ne, const Real& tol, int n_samples, const PrecisionContext& ctx);

nlohmann::json wn_to_json(const WnSample& s);
nlohmann::json fit_to_json(const AsymptoticFit& f);
nlohmann::json claim_to_json(const ClaimReport& r);
nlohmann::json ode_to_json(const OdeReport& r);
nlohmann::json second_iterate_to_json(const SecondIterateReport& r);
nlohmann::json affinity_to_json(const AffinityVerdict& v);

}  // namespace intmult
