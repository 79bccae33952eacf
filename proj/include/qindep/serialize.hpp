#ifndef QINDEP_SERIALIZE_HPP
#define QINDEP_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "qindep/bounds.hpp"
#include "qindep/independence.hpp"
#include "qindep/oracle.hpp"
#include "qindep/propensity.hpp"

// JSON forms of the library's value types. Infinite numbers are written as the
// strings "inf" and "-inf".

namespace qindep {

nlohmann::json to_json(const GridPropensity& p);
// Throws ParseError on malformed text or a document that is not
// {"n": N, "values": [...]} with N matching the array length.
GridPropensity propensity_from_json(const std::string& text);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const MonotonicityReport& r);
nlohmann::json to_json(const IdentifiedSet& s);
nlohmann::json to_json(const VerifyReport& r);

}  // namespace qindep

#endif  // QINDEP_SERIALIZE_HPP
