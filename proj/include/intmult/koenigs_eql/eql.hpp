#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "intmult/maps/maps.hpp"
#include "intmult/numerics/precision.hpp"

namespace intmult {

struct Disk {
  Complex center;
  Real radius;

  Complex boundary_point(long k, long count) const;
};

// Truncated power series helpers (coefficient k of t^k).
using Series = std::vector<Complex>;
Series series_mul(const Series& a, const Series& b, int order);
// b(a(t) - a_0), truncated.
Series series_compose(const Series& b, const Series& a, int order);

// Jet of u o v from the jets of u (at v(z)) and v (at z).
Jet2 compose_jets(const Jet2& u, const Jet2& v);
// Jet of the local inverse of F at F(x), given x and the jet of F at x.
Jet2 inverse_jet(const Complex& x, const Jet2& F);

// f^k as an evaluator, derivatives by the chain rule along the orbit.
class IterateEvaluator : public MapEvaluator {
 public:
  IterateEvaluator(std::shared_ptr<const MapEvaluator> f, int k);
  Jet2 jet(const Complex& z) const override;
  std::vector<Complex> taylor(const Complex& z, int order) const override;
  const std::string& description() const override { return description_; }
  bool is_rational() const override { return f_->is_rational(); }
  int power() const noexcept { return k_; }
  const MapEvaluator& base() const noexcept { return *f_; }

 private:
  std::shared_ptr<const MapEvaluator> f_;
  int k_;
  std::string description_;
};

// Single-valued branch of F^-1, pinned by F(seed_point) = seed_value and
// continued along the segment from seed_value (predictor-corrector Newton,
// step halving on failure).
struct BranchDescriptor {
  Complex seed_value;
  Complex seed_point;
};

// Throws ContractionFailure when the continuation cannot make progress.
Jet2 continue_inverse(const MapEvaluator& F, const BranchDescriptor& b, const Complex& v);

// Polishes F(x) = v from x (plain Newton). Throws NonConvergence.
Complex newton_solve(const MapEvaluator& F, const Complex& v, Complex x, int max_iter = 60);

// Dynamics of an escaping quadratic-like map: the forward map on U and the
// inverse branches g1, g2 on V. Evaluated at the working precision.
class EqlDynamics {
 public:
  virtual ~EqlDynamics() = default;
  virtual Jet2 forward(const Complex& z) const = 0;
  virtual Jet2 branch(int i, const Complex& v) const = 0;
  virtual std::vector<Complex> forward_taylor(const Complex& z, int order) const = 0;
  // true when g1(v) = v / lambda1 exactly, i.e. no chart is needed
  virtual bool linear_first_branch() const { return false; }
  virtual nlohmann::json to_json() const = 0;
};

// Branches of (f^n)^-1 given by seeds.
class IterateDynamics : public EqlDynamics {
 public:
  IterateDynamics(RationalMap base, int n, BranchDescriptor g1, BranchDescriptor g2);
  Jet2 forward(const Complex& z) const override { return F_.jet(z); }
  Jet2 branch(int i, const Complex& v) const override;
  std::vector<Complex> forward_taylor(const Complex& z, int order) const override { return F_.taylor(z, order); }
  nlohmann::json to_json() const override;

  const RationalMap& base() const noexcept { return base_; }
  const BranchDescriptor& seed(int i) const { return i == 1 ? g1_ : g2_; }

 private:
  RationalMap base_;
  IterateEvaluator F_;
  BranchDescriptor g1_, g2_;
};

// f1(z) = lambda1 z on U1 = D(0, radius / |lambda1|) and f2(z) = slope z + offset.
class AffineModel : public EqlDynamics {
 public:
  AffineModel(Complex lambda1, Complex slope, Complex offset, Real radius);
  Jet2 forward(const Complex& z) const override;
  Jet2 branch(int i, const Complex& v) const override;
  std::vector<Complex> forward_taylor(const Complex& z, int order) const override;
  bool linear_first_branch() const override { return true; }
  nlohmann::json to_json() const override;

 private:
  Complex lambda1_, slope_, offset_;
  Real radius_;
};

// f1(z) = lambda1 z on U1 = D(0, radius / |lambda1|) and
// f2(z) = c + s (z - c) + q (z - c)^2, with g2 the branch of f2^-1 through c.
class QuadraticModel : public EqlDynamics {
 public:
  QuadraticModel(Complex lambda1, Complex c, Complex s, Complex q, Real radius);
  Jet2 forward(const Complex& z) const override;
  Jet2 branch(int i, const Complex& v) const override;
  std::vector<Complex> forward_taylor(const Complex& z, int order) const override;
  bool linear_first_branch() const override { return true; }
  nlohmann::json to_json() const override;

 private:
  Complex lambda1_, c_, s_, q_;
  Real radius_;
};

struct EscapingQuadraticLike {
  std::shared_ptr<const EqlDynamics> dynamics;
  std::string base_map;  // description
  int n = 1;
  Disk V;
  Complex z1, z2, lambda1, lambda2;
  Real containment_margin;
};

struct InclusionCheck {
  std::string name;
  bool ok = false;
  Real margin;  // worst sampled gap, negative when violated
};

struct ExtractionTrace {
  int z1_period = 0;
  Complex z1_multiplier;  // multiplier of the p-cycle through z1
  Disk V1;
  int preimage_depth = 0;
  Complex z2_pre;
  int m1 = 0, m2 = 0, n1 = 0, n2 = 0;
  Disk W1, W2;  // enclosing disks of the sampled boundaries
  std::vector<InclusionCheck> inclusions;
};

struct EqlInvariantReport {
  Real right_inverse;    // sup |f^n(g_i(v)) - v| over boundary samples
  Real fixed_point;      // max |g_i(z_i) - z_i|
  Real containment_margin;
  bool disjoint = false;
  bool repelling = false;
  bool ok = false;
};

// Right inverse, fixed points, repulsion and U1, U2 containment, checked on
// `samples` boundary points of V.
EqlInvariantReport check_invariants(const EscapingQuadraticLike& eql, const PrecisionContext& ctx,
                                    int samples = 256);

struct ExtractOptions {
  int p_search_max = 3;
  int depth_max = 12;
  int critical_depth = 20;
  int m_budget = 64;
  int boundary_samples = 256;
  long max_preimages = 20000;
};

struct Extraction {
  EscapingQuadraticLike eql;
  ExtractionTrace trace;
};

// Throws SearchExhausted when no usable z1 or preimage is found within the
// budgets and VerificationFailure when a sampled inclusion fails.
Extraction extract_eql(const RationalMap& f, const ExtractOptions& opts, const PrecisionContext& ctx);

// Synthetic models, assembled directly with n = 1 and V = D(0, radius).
EscapingQuadraticLike affine_model(const Complex& lambda1, const Complex& slope, const Complex& offset,
                                   const Real& radius, const PrecisionContext& ctx);
EscapingQuadraticLike quadratic_model(const Complex& lambda1, const Complex& c, const Complex& s, const Complex& q,
                                      const Real& radius, const PrecisionContext& ctx);

nlohmann::json complex_to_json(const Complex& z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json eql_to_json(const EscapingQuadraticLike& eql);
// Throws InvalidArgument on malformed documents.
EscapingQuadraticLike eql_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const ExtractionTrace& t);
nlohmann::json invariants_to_json(const EqlInvariantReport& r);

}  // namespace intmult
