#include "intmult/koenigs_eql/eql.hpp"

#include <optional>

#include "intmult/errors.hpp"
#include "intmult/io/map_json.hpp"

namespace intmult {

namespace {

Real max1(const Real& x) { return x < Real(1L) ? Real(1L) : x; }

Real newton_eps(const Complex& x) { return exp2i(12 - Real::working_precision()) * max1(abs(x)); }

// Newton on F(y) = v from x; nullopt when it does not settle in max_iter.
std::optional<Complex> try_newton(const MapEvaluator& F, const Complex& v, Complex x, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const Jet2 j = F.jet(x);
    if (!j.v.is_finite() || !j.d1.is_finite() || j.d1.is_zero()) return std::nullopt;
    const Complex dx = (j.v - v) / j.d1;
    x -= dx;
    if (!x.is_finite()) return std::nullopt;
    if (abs(dx) <= newton_eps(x)) return x;
  }
  return std::nullopt;
}

int winding_number(const std::vector<Complex>& curve, const Complex& p) {
  Real total(0L);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const Complex a = curve[k] - p;
    const Complex b = curve[(k + 1) % curve.size()] - p;
    total += arg(b / a);
  }
  return static_cast<int>(std::lround(total.to_double() / (2 * 3.141592653589793)));
}

}  // namespace

Complex Disk::boundary_point(long k, long count) const {
  const Real theta = Real(2L) * Real::pi() * Real(k) / Real(count);
  return center + Complex::polar(radius, theta);
}

Series series_mul(const Series& a, const Series& b, int order) {
  Series r(order + 1, Complex(0L));
  for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; i + j <= order && j < static_cast<int>(b.size()); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series series_compose(const Series& b, const Series& a, int order) {
  Series inner = a;
  inner.resize(order + 1, Complex(0L));
  inner[0] = Complex(0L);
  Series r(order + 1, Complex(0L));
  for (int k = static_cast<int>(b.size()) - 1; k >= 0; --k) {
    r = series_mul(r, inner, order);
    r[0] += b[k];
  }
  return r;
}

Jet2 compose_jets(const Jet2& u, const Jet2& v) {
  return Jet2{u.v, u.d1 * v.d1, u.d2 * v.d1 * v.d1 + u.d1 * v.d2};
}

Jet2 inverse_jet(const Complex& x, const Jet2& F) {
  const Complex g1 = reciprocal(F.d1);
  return Jet2{x, g1, -F.d2 * g1 * g1 * g1};
}

IterateEvaluator::IterateEvaluator(std::shared_ptr<const MapEvaluator> f, int k) : f_(std::move(f)), k_(k) {
  if (k_ < 1) throw InvalidArgument("iterate power must be >= 1");
  description_ = k_ == 1 ? f_->description() : "(" + f_->description() + ")^" + std::to_string(k_);
}

Jet2 IterateEvaluator::jet(const Complex& z) const {
  Jet2 acc{z, Complex(1L), Complex(0L)};
  for (int j = 0; j < k_; ++j) {
    acc = compose_jets(f_->jet(acc.v), acc);
    if (!acc.v.is_finite()) return acc;
  }
  return acc;
}

std::vector<Complex> IterateEvaluator::taylor(const Complex& z, int order) const {
  Series s = f_->taylor(z, order);
  for (int j = 1; j < k_; ++j) {
    const Series next = f_->taylor(s[0], order);
    const int o = std::min<int>(order, static_cast<int>(std::min(s.size(), next.size())) - 1);
    s = series_compose(next, s, o);
  }
  return s;
}

Complex newton_solve(const MapEvaluator& F, const Complex& v, Complex x, int max_iter) {
  auto r = try_newton(F, v, std::move(x), max_iter);
  if (!r) throw NonConvergence("Newton did not converge for " + F.description(), -1.0);
  return *r;
}

Jet2 continue_inverse(const MapEvaluator& F, const BranchDescriptor& b, const Complex& v) {
  auto seed = try_newton(F, b.seed_value, b.seed_point, 60);
  if (!seed) throw ContractionFailure("branch seed does not solve F(x) = v for " + F.description());
  Complex x = *seed;
  Jet2 jx = F.jet(x);
  const Complex dv = v - b.seed_value;
  double t = 0.0, h = 1.0;
  while (t < 1.0) {
    const double step = std::min(h, 1.0 - t);
    const bool last = t + step >= 1.0;
    const Complex vt = last ? v : b.seed_value + dv * Real(t + step);
    const Complex pred = x + (vt - jx.v) / jx.d1;
    auto y = pred.is_finite() ? try_newton(F, vt, pred, 12) : std::nullopt;
    // a corrector that moves far from the predictor has probably jumped branch
    if (!y || abs(*y - pred) > Real(0.25) * abs(pred - x) + newton_eps(pred)) {
      h = step / 2;
      if (h < 1e-12) {
        throw ContractionFailure("branch continuation stalled at " + to_string(vt, 10) + " for " + F.description());
      }
      continue;
    }
    x = *y;
    jx = F.jet(x);
    t = last ? 1.0 : t + step;
    h = std::min(1.0, 2 * step);
  }
  return inverse_jet(x, jx);
}

IterateDynamics::IterateDynamics(RationalMap base, int n, BranchDescriptor g1, BranchDescriptor g2)
    : base_(base), F_(std::make_shared<RationalEvaluator>(std::move(base)), n), g1_(std::move(g1)), g2_(std::move(g2)) {}

Jet2 IterateDynamics::branch(int i, const Complex& v) const {
  if (i != 1 && i != 2) throw InvalidArgument("branch index must be 1 or 2");
  return continue_inverse(F_, seed(i), v);
}

nlohmann::json IterateDynamics::to_json() const {
  auto seed_json = [](const BranchDescriptor& b) {
    return nlohmann::json{{"seed_value", complex_to_json(b.seed_value)}, {"seed_point", complex_to_json(b.seed_point)}};
  };
  return {{"kind", "iterate"}, {"base_map", map_to_json(base_)}, {"n", F_.power()},
          {"g1", seed_json(g1_)}, {"g2", seed_json(g2_)}};
}

namespace {

bool in_first_component(const Complex& z, const Complex& lambda1, const Real& radius) {
  return abs(z) * abs(lambda1) <= radius * Real(1.000001);
}

}  // namespace

AffineModel::AffineModel(Complex lambda1, Complex slope, Complex offset, Real radius)
    : lambda1_(std::move(lambda1)), slope_(std::move(slope)), offset_(std::move(offset)), radius_(std::move(radius)) {
  if (abs(lambda1_) <= Real(1L) || abs(slope_) <= Real(1L)) throw InvalidArgument("affine model needs |slopes| > 1");
}

Jet2 AffineModel::forward(const Complex& z) const {
  if (in_first_component(z, lambda1_, radius_)) return Jet2{lambda1_ * z, lambda1_, Complex(0L)};
  return Jet2{slope_ * z + offset_, slope_, Complex(0L)};
}

Jet2 AffineModel::branch(int i, const Complex& v) const {
  if (i == 1) return Jet2{v / lambda1_, reciprocal(lambda1_), Complex(0L)};
  if (i == 2) return Jet2{(v - offset_) / slope_, reciprocal(slope_), Complex(0L)};
  throw InvalidArgument("branch index must be 1 or 2");
}

std::vector<Complex> AffineModel::forward_taylor(const Complex& z, int order) const {
  const Jet2 j = forward(z);
  std::vector<Complex> c{j.v, j.d1};
  c.resize(std::max(order, 0) + 1, Complex(0L));
  return c;
}

nlohmann::json AffineModel::to_json() const {
  return {{"kind", "affine"},
          {"lambda1", complex_to_json(lambda1_)},
          {"slope", complex_to_json(slope_)},
          {"offset", complex_to_json(offset_)},
          {"radius", radius_.to_string()}};
}

QuadraticModel::QuadraticModel(Complex lambda1, Complex c, Complex s, Complex q, Real radius)
    : lambda1_(std::move(lambda1)), c_(std::move(c)), s_(std::move(s)), q_(std::move(q)), radius_(std::move(radius)) {
  if (abs(lambda1_) <= Real(1L) || abs(s_) <= Real(1L)) throw InvalidArgument("quadratic model needs |slopes| > 1");
}

Jet2 QuadraticModel::forward(const Complex& z) const {
  if (in_first_component(z, lambda1_, radius_)) return Jet2{lambda1_ * z, lambda1_, Complex(0L)};
  const Complex u = z - c_;
  return Jet2{c_ + s_ * u + q_ * u * u, s_ + Complex(2L) * q_ * u, Complex(2L) * q_};
}

Jet2 QuadraticModel::branch(int i, const Complex& v) const {
  if (i == 1) return Jet2{v / lambda1_, reciprocal(lambda1_), Complex(0L)};
  if (i != 2) throw InvalidArgument("branch index must be 1 or 2");
  // q u^2 + s u - (v - c) = 0, root near (v - c)/s in the cancellation-free form
  Complex root = sqrt(s_ * s_ + Complex(4L) * q_ * (v - c_));
  if ((root.re() * s_.re() + root.im() * s_.im()).sign() < 0) root = -root;
  const Complex u = Complex(2L) * (v - c_) / (s_ + root);
  const Complex d1 = reciprocal(s_ + Complex(2L) * q_ * u);
  return Jet2{c_ + u, d1, Complex(-2L) * q_ * d1 * d1 * d1};
}

std::vector<Complex> QuadraticModel::forward_taylor(const Complex& z, int order) const {
  const Jet2 j = forward(z);
  std::vector<Complex> c{j.v, j.d1, j.d2 / Complex(2L)};
  c.resize(std::max(order, 0) + 1, Complex(0L));
  return c;
}

nlohmann::json QuadraticModel::to_json() const {
  return {{"kind", "quadratic"},
          {"lambda1", complex_to_json(lambda1_)},
          {"c", complex_to_json(c_)},
          {"s", complex_to_json(s_)},
          {"q", complex_to_json(q_)},
          {"radius", radius_.to_string()}};
}

EqlInvariantReport check_invariants(const EscapingQuadraticLike& eql, const PrecisionContext& ctx, int samples) {
  ctx.validate();
  PrecisionScope scope(ctx.mantissa_bits);
  const EqlDynamics& dyn = *eql.dynamics;
  EqlInvariantReport r;
  r.right_inverse = Real(0L);
  std::vector<Complex> b1, b2;
  for (int k = 0; k < samples; ++k) {
    const Complex v = eql.V.boundary_point(k, samples);
    const Complex x1 = dyn.branch(1, v).v;
    const Complex x2 = dyn.branch(2, v).v;
    r.right_inverse = max(r.right_inverse, abs(dyn.forward(x1).v - v));
    r.right_inverse = max(r.right_inverse, abs(dyn.forward(x2).v - v));
    b1.push_back(x1);
    b2.push_back(x2);
  }
  r.fixed_point = max(abs(dyn.branch(1, eql.z1).v - eql.z1), abs(dyn.branch(2, eql.z2).v - eql.z2));
  r.repelling = abs(eql.lambda1) > Real(1L) && abs(eql.lambda2) > Real(1L);

  // U_i inside V, and U1 inside a disk about z1 that the Jordan domain U2
  // (which does not contain z1) stays clear of
  Real inside(eql.V.radius);
  Real rho1(0L), gap2(eql.V.radius * Real(4L));
  for (int k = 0; k < samples; ++k) {
    inside = min(inside, eql.V.radius - abs(b1[k] - eql.V.center));
    inside = min(inside, eql.V.radius - abs(b2[k] - eql.V.center));
    rho1 = max(rho1, abs(b1[k] - eql.z1));
    gap2 = min(gap2, abs(b2[k] - eql.z1));
  }
  r.disjoint = winding_number(b2, eql.z1) == 0 && winding_number(b1, eql.z1) == 1 && gap2 > rho1;
  r.containment_margin = min(inside, gap2 - rho1);
  const Real scale = max1(abs(eql.V.center) + eql.V.radius);
  const Real tol = ctx.tol() * scale;
  r.ok = r.right_inverse < tol && r.fixed_point < tol && r.repelling && r.disjoint &&
         r.containment_margin > Real(0L);
  return r;
}

namespace {

EscapingQuadraticLike assemble_model(std::shared_ptr<const EqlDynamics> dyn, const std::string& desc,
                                     const Complex& lambda1, const Complex& z2, const Complex& lambda2,
                                     const Real& radius, const PrecisionContext& ctx) {
  EscapingQuadraticLike e;
  e.dynamics = std::move(dyn);
  e.base_map = desc;
  e.n = 1;
  e.V = Disk{Complex(0L), radius};
  e.z1 = Complex(0L);
  e.lambda1 = lambda1;
  e.z2 = z2;
  e.lambda2 = lambda2;
  const EqlInvariantReport rep = check_invariants(e, ctx);
  if (!rep.ok) throw InvalidArgument("model is not an escaping quadratic-like map on D(0, " + radius.to_string(6) + ")");
  e.containment_margin = rep.containment_margin;
  return e;
}

}  // namespace

EscapingQuadraticLike affine_model(const Complex& lambda1, const Complex& slope, const Complex& offset,
                                   const Real& radius, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  auto dyn = std::make_shared<AffineModel>(lambda1, slope, offset, radius);
  const Complex z2 = offset / (Complex(1L) - slope);
  return assemble_model(dyn, "affine model", lambda1, z2, slope, radius, ctx);
}

EscapingQuadraticLike quadratic_model(const Complex& lambda1, const Complex& c, const Complex& s, const Complex& q,
                                      const Real& radius, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.mantissa_bits);
  auto dyn = std::make_shared<QuadraticModel>(lambda1, c, s, q, radius);
  return assemble_model(dyn, "quadratic model", lambda1, c, s, radius, ctx);
}

nlohmann::json complex_to_json(const Complex& z) { return nlohmann::json::array({z.re().to_string(), z.im().to_string()}); }

Complex complex_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw InvalidArgument("complex number must be [\"re\", \"im\"]");
  }
  return Complex(Real(j[0].get<std::string>()), Real(j[1].get<std::string>()));
}

namespace {

nlohmann::json disk_to_json(const Disk& d) {
  return {{"center", complex_to_json(d.center)}, {"radius", d.radius.to_string()}};
}

Disk disk_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("radius") || !j["radius"].is_string()) {
    throw InvalidArgument("disk must be {\"center\", \"radius\"}");
  }
  return Disk{complex_from_json(j["center"]), Real(j["radius"].get<std::string>())};
}

BranchDescriptor seed_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("seed_value") || !j.contains("seed_point")) {
    throw InvalidArgument("branch must be {\"seed_value\", \"seed_point\"}");
  }
  return BranchDescriptor{complex_from_json(j["seed_value"]), complex_from_json(j["seed_point"])};
}

const nlohmann::json& field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  return j[key];
}

}  // namespace

nlohmann::json eql_to_json(const EscapingQuadraticLike& eql) {
  return {{"dynamics", eql.dynamics->to_json()},
          {"base_map", eql.base_map},
          {"n", eql.n},
          {"V", disk_to_json(eql.V)},
          {"z1", complex_to_json(eql.z1)},
          {"z2", complex_to_json(eql.z2)},
          {"lambda1", complex_to_json(eql.lambda1)},
          {"lambda2", complex_to_json(eql.lambda2)},
          {"containment_margin", eql.containment_margin.to_string()}};
}

EscapingQuadraticLike eql_from_json(const nlohmann::json& j) {
  try {
    EscapingQuadraticLike e;
    const auto& dj = field(j, "dynamics");
    const std::string kind = field(dj, "kind").get<std::string>();
    e.n = field(j, "n").get<int>();
    if (kind == "iterate") {
      e.dynamics = std::make_shared<IterateDynamics>(map_from_json(field(dj, "base_map")), field(dj, "n").get<int>(),
                                                     seed_from_json(field(dj, "g1")), seed_from_json(field(dj, "g2")));
    } else if (kind == "affine") {
      e.dynamics = std::make_shared<AffineModel>(complex_from_json(field(dj, "lambda1")),
                                                 complex_from_json(field(dj, "slope")),
                                                 complex_from_json(field(dj, "offset")),
                                                 Real(field(dj, "radius").get<std::string>()));
    } else if (kind == "quadratic") {
      e.dynamics = std::make_shared<QuadraticModel>(
          complex_from_json(field(dj, "lambda1")), complex_from_json(field(dj, "c")),
          complex_from_json(field(dj, "s")), complex_from_json(field(dj, "q")),
          Real(field(dj, "radius").get<std::string>()));
    } else {
      throw InvalidArgument("unknown dynamics kind '" + kind + "'");
    }
    e.base_map = field(j, "base_map").get<std::string>();
    e.V = disk_from_json(field(j, "V"));
    e.z1 = complex_from_json(field(j, "z1"));
    e.z2 = complex_from_json(field(j, "z2"));
    e.lambda1 = complex_from_json(field(j, "lambda1"));
    e.lambda2 = complex_from_json(field(j, "lambda2"));
    e.containment_margin = Real(field(j, "containment_margin").get<std::string>());
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidArgument(std::string("malformed EQL document: ") + ex.what());
  }
}

nlohmann::json trace_to_json(const ExtractionTrace& t) {
  nlohmann::json inc = nlohmann::json::array();
  for (const auto& c : t.inclusions) inc.push_back({{"name", c.name}, {"ok", c.ok}, {"margin", c.margin.to_string(17)}});
  return {{"z1_period", t.z1_period},
          {"z1_multiplier", complex_to_json(t.z1_multiplier)},
          {"V1", disk_to_json(t.V1)},
          {"preimage_depth", t.preimage_depth},
          {"z2_pre", complex_to_json(t.z2_pre)},
          {"m1", t.m1},
          {"m2", t.m2},
          {"n1", t.n1},
          {"n2", t.n2},
          {"W1", disk_to_json(t.W1)},
          {"W2", disk_to_json(t.W2)},
          {"inclusions", inc}};
}

nlohmann::json invariants_to_json(const EqlInvariantReport& r) {
  return {{"right_inverse", r.right_inverse.to_double()},
          {"fixed_point", r.fixed_point.to_double()},
          {"containment_margin", r.containment_margin.to_double()},
          {"disjoint", r.disjoint},
          {"repelling", r.repelling},
          {"ok", r.ok}};
}

}  // namespace intmult
