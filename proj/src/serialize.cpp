#include "qindep/serialize.hpp"

#include <cmath>
#include <stdexcept>

#include "qindep/errors.hpp"

namespace qindep {
namespace {

nlohmann::json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::json to_json(const GridPropensity& p) {
  nlohmann::json values = nlohmann::json::array();
  for (double v : p.values()) values.push_back(v);
  return {{"n", p.n_cells()}, {"values", std::move(values)}};
}

GridPropensity propensity_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
  }
  if (!doc.is_object() || !doc.contains("values") ||
      !doc["values"].is_array()) {
    throw ParseError("expected an object with a \"values\" array", 0);
  }
  std::vector<double> values;
  for (const auto& v : doc["values"]) {
    if (!v.is_number()) throw ParseError("non-numeric propensity value", 0);
    values.push_back(v.get<double>());
  }
  if (doc.contains("n")) {
    if (!doc["n"].is_number_unsigned() ||
        doc["n"].get<std::size_t>() != values.size()) {
      throw ParseError("\"n\" does not match the number of values", 0);
    }
  }
  try {
    return GridPropensity(std::move(values));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json out = {{"pass", v.pass}, {"tolerance", v.tolerance}};
  if (v.witness) {
    out["witness"] = {{"t1", v.witness->t1},
                      {"t2", v.witness->t2},
                      {"average", v.witness->average},
                      {"expected", v.witness->expected}};
  }
  if (v.statistic) out["statistic"] = *v.statistic;
  if (!v.warning.empty()) out["warning"] = v.warning;
  return out;
}

nlohmann::json to_json(const MonotonicityReport& r) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& [lo, hi] : r.partition) parts.push_back({lo, hi});
  return {{"is_monotone", r.is_monotone},
          {"direction_changes", r.direction_changes},
          {"partition", std::move(parts)}};
}

nlohmann::json to_json(const IdentifiedSet& s) {
  nlohmann::json out = {{"param", param_name(s.param)},
                        {"lo", number(s.lo)},
                        {"hi", number(s.hi)},
                        {"interior_sharp", s.interior_sharp},
                        {"spec", s.spec.describe()}};
  if (!std::isnan(s.q)) out["q"] = s.q;
  if (!s.warning.empty()) out["warning"] = s.warning;
  return out;
}

nlohmann::json to_json(const VerifyReport& r) {
  return {{"spec", r.spec.describe()},
          {"p_x", r.p_x},
          {"n_cells", r.n_cells},
          {"max_discrepancy", r.max_discrepancy},
          {"worst_u", r.worst_u},
          {"solver_gap", r.solver_gap},
          {"pass", r.pass}};
}

}  // namespace qindep
