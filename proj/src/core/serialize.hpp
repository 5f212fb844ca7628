#pragma once

// JSON encodings of the value types. Rationals are strings "a/b"; digit
// lists are sorted; every document re-parses into an equal value.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core/compact_open.hpp"
#include "core/cyclotomic.hpp"
#include "core/decide.hpp"
#include "core/padic.hpp"
#include "core/qp_pairs.hpp"

namespace fuglede {

using Json = nlohmann::ordered_json;

/// Parses JSON text; Parse errors carry the byte position.
Json parse_json_text(std::string_view text, std::string_view what);

/// Typed field access with errors naming the field path.
const Json& require_field(const Json& doc, std::string_view key, std::string_view path);
std::int64_t json_int(const Json& value, std::string_view path);
Rational json_rational(const Json& value, std::string_view path);
std::vector<std::int64_t> json_int_list(const Json& value, std::string_view path);

Json to_json(const Rational& x);
Json to_json(const Ball& b);
Ball ball_from_json(PrimeContext ctx, const Json& doc, std::string_view path = "ball");

Json to_json(const CyclotomicSum& s);
CyclotomicSum cyclotomic_from_json(const Json& doc, std::string_view path = "sum");

Json to_json(const ScaledCyclotomic& s);

Json to_json(const CompactOpenSet& omega);
/// Re-normalizes on load; appends a warning when the input was not canonical.
CompactOpenSet compact_open_from_json(const Json& doc, std::vector<std::string>* warnings,
                                      std::string_view path = "set");

Json to_json(const UniformDiscreteSet& e);
UniformDiscreteSet uniform_discrete_from_json(const Json& doc, std::string_view path = "elements");

Json to_json(const CensusRecord& r);
CensusRecord census_record_from_json(const Json& doc, std::string_view path = "record");
Json census_summary_to_json(const Census& c);

Json to_json(const PairReport& r);

}  // namespace fuglede
