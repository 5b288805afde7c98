#include "intmult/io/map_json.hpp"

#include "intmult/errors.hpp"

namespace intmult {

namespace {

mpz_class integer_from_json(const nlohmann::json& j) {
  try {
    if (j.is_string()) return mpz_class(j.get<std::string>());
    if (j.is_number_integer()) return mpz_class(j.get<long>());
  } catch (const std::invalid_argument&) {
  }
  throw InvalidArgument("coefficient entries must be integers or integer strings, got " + j.dump());
}

mpq_class fraction(const nlohmann::json& num, const nlohmann::json& den) {
  mpz_class d = integer_from_json(den);
  if (d == 0) throw InvalidArgument("zero denominator in coefficient");
  mpq_class q(integer_from_json(num), d);
  q.canonicalize();
  return q;
}

ExactPolynomial poly_from_json(const nlohmann::json& j, std::optional<long> field_d) {
  if (!j.is_array()) throw InvalidArgument("polynomial must be an array of coefficients");
  std::vector<ExactScalar> c;
  for (const auto& e : j) c.push_back(scalar_from_json(e, field_d));
  return ExactPolynomial(std::move(c));
}

}  // namespace

nlohmann::json scalar_to_json(const ExactScalar& x) {
  const mpq_class& r = x.rational_part();
  const mpq_class& s = x.radical_part();
  return nlohmann::json::array({r.get_num().get_str(), r.get_den().get_str(), s.get_num().get_str(),
                                s.get_den().get_str()});
}

ExactScalar scalar_from_json(const nlohmann::json& j, std::optional<long> field_d) {
  if (!j.is_array() || j.size() != 4) throw InvalidArgument("coefficient must be [p, q, r, s], got " + j.dump());
  mpq_class rational = fraction(j[0], j[1]);
  mpq_class radical = fraction(j[2], j[3]);
  if (!field_d) {
    if (radical != 0) throw InvalidArgument("radical part given but field_d is null");
    return ExactScalar(rational);
  }
  return ExactScalar(rational, radical, *field_d);
}

nlohmann::json map_to_json(const RationalMap& f) {
  nlohmann::json j;
  auto d = f.field();
  j["field_d"] = d ? nlohmann::json(*d) : nlohmann::json(nullptr);
  j["num"] = nlohmann::json::array();
  j["den"] = nlohmann::json::array();
  for (const auto& c : f.num().coefficients()) j["num"].push_back(scalar_to_json(c));
  for (const auto& c : f.den().coefficients()) j["den"].push_back(scalar_to_json(c));
  return j;
}

RationalMap map_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) {
    throw InvalidArgument("map JSON needs 'num' and 'den'");
  }
  std::optional<long> field_d;
  if (j.contains("field_d") && !j["field_d"].is_null()) {
    if (!j["field_d"].is_number_integer()) throw InvalidArgument("field_d must be null or an integer");
    field_d = j["field_d"].get<long>();
    if (!is_squarefree(*field_d) || *field_d <= 0) {
      throw InvalidArgument("field_d must be a squarefree positive integer");
    }
  }
  return RationalMap(poly_from_json(j["num"], field_d), poly_from_json(j["den"], field_d));
}

}  // namespace intmult
