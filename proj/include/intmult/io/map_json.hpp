#pragma once

#include "json.hpp"
#include "intmult/numerics/rational_map.hpp"

namespace intmult {

// {"field_d": null|int, "num": [[p,q,r,s], ...], "den": [...]}; each entry is
// p/q + (r/s) sqrt(-d), constant term first, integers written as strings.
nlohmann::json map_to_json(const RationalMap& f);
// Throws InvalidArgument on malformed documents.
RationalMap map_from_json(const nlohmann::json& j);

nlohmann::json scalar_to_json(const ExactScalar& x);
ExactScalar scalar_from_json(const nlohmann::json& j, std::optional<long> field_d);

}  // namespace intmult
