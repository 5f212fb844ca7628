#include "core/serialize.hpp"

#include <algorithm>

namespace fuglede {

namespace {

std::string join(std::string_view path, std::string_view key) {
  return std::string(path) + "." + std::string(key);
}

Json int_list(const std::vector<std::int64_t>& xs) {
  Json out = Json::array();
  for (auto x : xs) out.push_back(x);
  return out;
}

Json optional_list(const std::optional<std::vector<std::int64_t>>& xs) {
  return xs ? int_list(*xs) : Json(nullptr);
}

Json rows_to_json(const std::vector<std::vector<std::int64_t>>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(int_list(r));
  return out;
}

}  // namespace

Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::Parse, std::string(what) + ": invalid JSON at byte " + std::to_string(e.byte));
  }
}

const Json& require_field(const Json& doc, std::string_view key, std::string_view path) {
  if (!doc.is_object()) fail(ErrorCode::Parse, std::string(path) + ": expected a JSON object");
  auto it = doc.find(std::string(key));
  if (it == doc.end()) fail(ErrorCode::Parse, "missing field '" + join(path, key) + "'");
  return *it;
}

std::int64_t json_int(const Json& value, std::string_view path) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    Rational q = parse_rational(s);
    if (denominator(q) == 1 && numerator(q) >= std::numeric_limits<std::int64_t>::min() &&
        numerator(q) <= std::numeric_limits<std::int64_t>::max()) {
      return static_cast<std::int64_t>(numerator(q));
    }
  }
  fail(ErrorCode::Parse, "field '" + std::string(path) + "': expected an integer, got " + value.dump());
}

Rational json_rational(const Json& value, std::string_view path) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_string()) {
    try {
      return parse_rational(value.get_ref<const std::string&>());
    } catch (const Error& e) {
      fail(ErrorCode::Parse, "field '" + std::string(path) + "': " + e.what());
    }
  }
  fail(ErrorCode::Parse, "field '" + std::string(path) + "': expected a rational \"a/b\", got " + value.dump());
}

std::vector<std::int64_t> json_int_list(const Json& value, std::string_view path) {
  if (!value.is_array()) fail(ErrorCode::Parse, "field '" + std::string(path) + "': expected an array");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(json_int(value[i], std::string(path) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json to_json(const Rational& x) { return format_rational(x); }

Json to_json(const Ball& b) { return Json{{"v", b.v()}, {"M", b.M()}, {"c", b.c()}}; }

Ball ball_from_json(PrimeContext ctx, const Json& doc, std::string_view path) {
  return Ball(ctx, json_int(require_field(doc, "v", path), join(path, "v")),
              json_int(require_field(doc, "M", path), join(path, "M")),
              json_int(require_field(doc, "c", path), join(path, "c")));
}

Json to_json(const CyclotomicSum& s) {
  Json coeffs = Json::object();
  for (const auto& [j, a] : s.coeffs()) coeffs[std::to_string(j)] = a.str();
  return Json{{"p", s.context().p()}, {"n", s.order_exp()}, {"coeffs", coeffs}};
}

CyclotomicSum cyclotomic_from_json(const Json& doc, std::string_view path) {
  PrimeContext ctx(json_int(require_field(doc, "p", path), join(path, "p")));
  std::int64_t n = json_int(require_field(doc, "n", path), join(path, "n"));
  if (n < 0) fail(ErrorCode::Parse, "field '" + join(path, "n") + "': order must be >= 0");
  const Json& coeffs = require_field(doc, "coeffs", path);
  if (!coeffs.is_object()) fail(ErrorCode::Parse, "field '" + join(path, "coeffs") + "': expected an object");
  CyclotomicSum s(ctx, n);
  for (const auto& [key, value] : coeffs.items()) {
    const std::string where = join(path, "coeffs") + "." + key;
    std::int64_t j = json_int(Json(key), where);
    if (j < 0 || j >= s.modulus()) fail(ErrorCode::Parse, "field '" + where + "': exponent outside [0, p^n)");
    Rational a = json_rational(value, where);
    if (denominator(a) != 1) fail(ErrorCode::Parse, "field '" + where + "': coefficient must be an integer");
    s.add_term(j, numerator(a));
  }
  return s;
}

Json to_json(const ScaledCyclotomic& s) {
  Json out{{"power", s.power}, {"sum", to_json(s.sum)}};
  if (auto q = s.as_rational()) out["value"] = to_json(*q);
  return out;
}

Json to_json(const CompactOpenSet& omega) {
  return Json{{"p", omega.p()}, {"v", omega.v()}, {"M", omega.M()}, {"digits", int_list(omega.digits())}};
}

CompactOpenSet compact_open_from_json(const Json& doc, std::vector<std::string>* warnings, std::string_view path) {
  PrimeContext ctx(json_int(require_field(doc, "p", path), join(path, "p")));
  std::int64_t v = doc.contains("v") ? json_int(doc["v"], join(path, "v")) : 0;
  std::int64_t M = json_int(require_field(doc, "M", path), join(path, "M"));
  auto digits = json_int_list(require_field(doc, "digits", path), join(path, "digits"));
  if (warnings) {
    auto sorted = digits;
    std::sort(sorted.begin(), sorted.end());
    bool was_sorted = sorted == digits && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    CompactOpenSet omega = CompactOpenSet::from_frame(ctx, v, M, digits);
    if (!was_sorted || !is_canonical_frame(ctx, v, M, sorted)) {
      warnings->push_back("warning: " + std::string(path) + " was not in canonical form; normalized to v=" +
                          std::to_string(omega.v()) + " M=" + std::to_string(omega.M()));
    }
    return omega;
  }
  return CompactOpenSet::from_frame(ctx, v, M, std::move(digits));
}

Json to_json(const UniformDiscreteSet& e) {
  Json elements = Json::array();
  for (const auto& x : e.elements()) elements.push_back(format_rational(x));
  return Json{{"p", e.p()}, {"window_exp", e.window_exp()}, {"elements", elements}};
}

UniformDiscreteSet uniform_discrete_from_json(const Json& doc, std::string_view path) {
  PrimeContext ctx(json_int(require_field(doc, "p", path), join(path, "p")));
  std::int64_t window = json_int(require_field(doc, "window_exp", path), join(path, "window_exp"));
  const Json& list = require_field(doc, "elements", path);
  if (!list.is_array()) fail(ErrorCode::Parse, "field '" + join(path, "elements") + "': expected an array");
  std::vector<Rational> elements;
  for (std::size_t i = 0; i < list.size(); ++i) {
    elements.push_back(json_rational(list[i], join(path, "elements") + "[" + std::to_string(i) + "]"));
  }
  return {ctx, std::move(elements), window};
}

Json to_json(const CensusRecord& r) {
  return Json{{"C", int_list(r.set)},
              {"is_tile", r.is_tile},
              {"is_spectral", r.is_spectral},
              {"is_homogeneous", r.is_homogeneous},
              {"I", int_list(r.branching_levels)},
              {"witness_T", optional_list(r.witness_complement)},
              {"witness_Lambda", optional_list(r.witness_spectrum)}};
}

CensusRecord census_record_from_json(const Json& doc, std::string_view path) {
  auto flag = [&](std::string_view key) {
    const Json& value = require_field(doc, key, path);
    if (!value.is_boolean()) fail(ErrorCode::Parse, "field '" + join(path, key) + "': expected a boolean");
    return value.get<bool>();
  };
  auto optional = [&](std::string_view key) -> std::optional<std::vector<std::int64_t>> {
    const Json& value = require_field(doc, key, path);
    if (value.is_null()) return std::nullopt;
    return json_int_list(value, join(path, key));
  };
  CensusRecord r;
  r.set = json_int_list(require_field(doc, "C", path), join(path, "C"));
  r.is_tile = flag("is_tile");
  r.is_spectral = flag("is_spectral");
  r.is_homogeneous = flag("is_homogeneous");
  r.branching_levels = json_int_list(require_field(doc, "I", path), join(path, "I"));
  r.witness_complement = optional("witness_T");
  r.witness_spectrum = optional("witness_Lambda");
  return r;
}

Json census_summary_to_json(const Census& c) {
  Json by_card = Json::array();
  for (const auto& [k, row] : c.by_cardinality) {
    by_card.push_back(Json{{"cardinality", k},
                           {"total", row.total},
                           {"tiles", row.tiles},
                           {"spectral", row.spectral},
                           {"homogeneous", row.homogeneous}});
  }
  Json by_branch = Json::array();
  for (const auto& [levels, row] : c.by_branching) {
    by_branch.push_back(Json{{"I", int_list(levels)},
                             {"observed", row.observed},
                             {"formula", row.formula ? Json(row.formula->str()) : Json(nullptr)}});
  }
  return Json{{"p", c.p},
              {"M", c.M},
              {"mode", c.mode},
              {"sets", c.records.size()},
              {"by_cardinality", by_card},
              {"by_branching", by_branch},
              {"disagreements", rows_to_json(c.disagreements)},
              {"cardinality_violations", rows_to_json(c.cardinality_violations)},
              {"witness_failures", rows_to_json(c.witness_failures)},
              {"formula_mismatches", rows_to_json(c.formula_mismatches)}};
}

Json to_json(const PairReport& r) {
  Json out{{"kind", r.kind},
           {"status", r.verified() ? "Verified" : "FailedAt"},
           {"verified_window", to_json(r.verified_window)},
           {"checked_points", r.checked_points}};
  if (r.failure) {
    out["failure"] = Json{{"xi", to_json(r.failure->xi)}, {"lhs", to_json(r.failure->lhs)}, {"rhs", to_json(r.failure->rhs)}};
  }
  if (r.n_f) out["n_f"] = *r.n_f;
  if (r.density) out["density"] = to_json(*r.density);
  if (r.branching_levels) out["I"] = int_list(*r.branching_levels);
  if (r.free_levels) out["J"] = int_list(*r.free_levels);
  return out;
}

}  // namespace fuglede
