#pragma once

#include <memory>

#include "intmult/koenigs_eql/eql.hpp"

namespace intmult {

struct KoenigsOptions {
  int N = 0;            // 0: escalate until successive phi_N agree on the grid
  int N_cap = 400;
  int taylor_order = 16;  // 1 gives the plain lambda^N (g^N(z) - z1)
  int grid = 20;
};

// phi with phi o F = lambda1 phi near the repelling fixed point z1 of F,
// normalized by phi(z1) = 0, phi'(z1) = 1, as
//   phi(z) ~ lambda1^N P(g^N(z) - z1),
// g the branch of F^-1 fixing z1 and P the degree-K Taylor polynomial of phi
// at z1 (P(t) = t when K = 1).
class KoenigsChart {
 public:
  // forward jet (phi, phi', phi'') at z in the domain
  Jet2 forward(const Complex& z) const;
  // phi^-1 by Newton polish of a forward-iteration guess. Throws
  // NonConvergence when the polish fails (typically near the edge).
  Complex inverse(const Complex& zeta) const;

  const Complex& z1() const noexcept { return z1_; }
  const Complex& lambda1() const noexcept { return lambda1_; }
  int N() const noexcept { return N_; }
  int taylor_order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const Disk& domain() const noexcept { return domain_; }
  // sup |phi(F(z)) - lambda1 phi(z)| over the sample grid
  const Real& residual() const noexcept { return residual_; }
  // sup |phi_N - phi_(N-1)| at the chosen N
  const Real& increment() const noexcept { return increment_; }
  long bits() const noexcept { return bits_; }

 private:
  friend KoenigsChart koenigs_chart(std::shared_ptr<const MapEvaluator>, const Complex&, const Complex&, const Disk&,
                                    const KoenigsOptions&, const PrecisionContext&);
  Jet2 forward_at_depth(const Complex& z, int N) const;
  // extra bits for depth N: g^N(z) - z1 cancels about N log2|lambda1| bits
  long guard_bits(int N) const;


  std::shared_ptr<const MapEvaluator> F_;
  Complex z1_, lambda1_;
  Complex z1_hi_;  // z1 at bits_ + guard_bits(N_)
  Disk domain_;
  int N_ = 0;
  std::vector<Complex> coeffs_;  // c_0 = 0, c_1 = 1, ...
  Real residual_, increment_;
  long bits_ = 53;
};

// Taylor coefficients of phi at z1 from those of F: c_1 = 1 and
// c_m (lambda^m - lambda) = -sum_{k<m} c_k [t^m] u(t)^k.
std::vector<Complex> koenigs_coefficients(const std::vector<Complex>& F_taylor, int order);

// z1 is polished as a fixed point of F at the working precision. Throws
// InvalidArgument unless |lambda1| > 1 and NonConvergence when the increments
// do not fall below 2^(10 - bits) within N_cap.
KoenigsChart koenigs_chart(std::shared_ptr<const MapEvaluator> F, const Complex& z1, const Complex& lambda1,
                           const Disk& domain, const KoenigsOptions& opts, const PrecisionContext& ctx);

nlohmann::json chart_to_json(const KoenigsChart& chart);

}  // namespace intmult
