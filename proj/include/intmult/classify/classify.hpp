#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "intmult/periodic/periodic.hpp"
#include "intmult/quadfield/quadfield.hpp"

namespace intmult {

enum class ClassificationStatus { consistent, refuted, inconclusive };

std::string to_string(ClassificationStatus s);

// A multiplier together with where it came from.
struct MultiplierRecord {
  int period = 1;
  SpherePoint representative;
  Complex multiplier;
  Real residual;
};

// The multiplier farthest from the ring of integers of Q(sqrt(-d)).
struct FieldRejection {
  long d = 1;
  MultiplierRecord by;
  Real distance;
};

// The multiplier whose smallest lattice distance over all tested d is largest,
// with that distance for every d.
struct Witness {
  MultiplierRecord record;
  std::vector<std::pair<long, Real>> distances;
  Real min_distance;
};

struct ClassificationVerdict {
  ClassificationStatus status = ClassificationStatus::inconclusive;
  std::vector<long> fields_surviving;
  std::vector<long> fields_ambiguous;  // no rejection, but some distance in (tol, 10 tol]
  std::vector<FieldRejection> rejections;
  std::optional<Witness> witness;
  int p_max_used = 0;
  long d_max_used = 0;
  long precision_used = 0;
  Real tol;
  std::optional<bool> eql_affinity;
  std::optional<double> eql_defect_ratio;  // sup_defect / radius of V in the chart
  std::string diagnostics;
};

struct ClassifyOptions {
  double tol = 0;  // 0: default_membership_tol(bits)
  bool eql_cross_check = false;
  double affinity_tol = 1e-6;
};

// Status is consistent when some squarefree d <= d_max has every multiplier
// within tol of its ring, refuted when every d has a multiplier farther than
// 10 tol, and inconclusive otherwise or when a computation fails.
ClassificationVerdict classify_map(const RationalMap& f, int p_max, long d_max, const PrecisionContext& ctx,
                                   const ClassifyOptions& opts = {});

struct SuiteEntry {
  std::string name;
  bool pass = false;
  int multipliers = 0;
  Real worst_distance;  // to the nearest rational integer
  std::string error;
};

struct SuiteReport {
  std::vector<SuiteEntry> entries;
  Real tol;
  int p_max = 0;
  bool pass = false;
};

// Power maps z^d and +-T_d for d = 2..4 and the Lattes doubling maps of
// y^2 = x^3 + 1 and y^2 = x^3 + x: every multiplier up to period p_max must be
// within tol of a rational integer. Throws InvalidArgument when p_max is
// outside 1..4.
SuiteReport verify_exceptional_suite(int p_max, const PrecisionContext& ctx, double tol = 0);

nlohmann::json record_to_json(const MultiplierRecord& r);
nlohmann::json classification_to_json(const ClassificationVerdict& v);
nlohmann::json suite_to_json(const SuiteReport& r);

}  // namespace intmult
