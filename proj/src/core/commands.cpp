#include "core/commands.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace fuglede {

namespace {

struct Frame {
  PrimeContext ctx;
  std::int64_t v;
  std::int64_t M;
  std::vector<std::int64_t> digits;
};

class Session {
 public:
  explicit Session(const Json& request) : req_(request) {
    if (!req_.is_object()) fail(ErrorCode::Parse, "request: expected a JSON object");
    json_ = has("json") && req_["json"].is_boolean() && req_["json"].get<bool>();
  }

  bool json_mode() const { return json_; }
  bool has(std::string_view key) const { return req_.contains(std::string(key)) && !req_[std::string(key)].is_null(); }
  const Json& at(std::string_view key) const { return require_field(req_, key, "request"); }
  std::string path(std::string_view key) const { return "request." + std::string(key); }

  std::int64_t integer(std::string_view key) const { return json_int(at(key), path(key)); }
  std::int64_t integer(std::string_view key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  Rational rational(std::string_view key, const Rational& fallback) const {
    return has(key) ? json_rational(at(key), path(key)) : fallback;
  }
  std::vector<std::int64_t> int_list(std::string_view key) const {
    const Json& value = at(key);
    if (value.is_string()) return parse_comma_list(value.get<std::string>(), path(key));
    return json_int_list(value, path(key));
  }
  std::vector<Rational> rational_list(std::string_view key) const {
    const Json& value = at(key);
    std::vector<Rational> out;
    if (value.is_string()) {
      std::stringstream in(value.get<std::string>());
      std::string item;
      while (std::getline(in, item, ',')) out.push_back(json_rational(Json(item), path(key)));
      return out;
    }
    if (!value.is_array()) fail(ErrorCode::Parse, "field '" + path(key) + "': expected a list");
    for (std::size_t i = 0; i < value.size(); ++i) {
      out.push_back(json_rational(value[i], path(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
  }
  bool flag(std::string_view key) const {
    if (!has(key)) return false;
    if (!at(key).is_boolean()) fail(ErrorCode::Parse, "field '" + path(key) + "': expected a boolean");
    return at(key).get<bool>();
  }

  PrimeContext prime() const { return PrimeContext(integer("p")); }

  /// The set exactly as written: a compact-open document or a digit list
  /// with --p and optional --v / --M.
  Frame frame() const {
    const Json& set = at("set");
    if (set.is_object()) {
      PrimeContext ctx(json_int(require_field(set, "p", "set"), "set.p"));
      std::int64_t v = set.contains("v") ? json_int(set["v"], "set.v") : 0;
      std::int64_t M = json_int(require_field(set, "M", "set"), "set.M");
      return {ctx, v, M, json_int_list(require_field(set, "digits", "set"), "set.digits")};
    }
    PrimeContext ctx = prime();
    std::vector<std::int64_t> digits =
        set.is_string() ? parse_comma_list(set.get<std::string>(), path("set")) : json_int_list(set, path("set"));
    std::int64_t M = has("M") ? integer("M") : inferred_depth(ctx, digits);
    return {ctx, integer("v", 0), M, std::move(digits)};
  }

  CompactOpenSet compact_open() {
    if (at("set").is_object()) return compact_open_from_json(at("set"), &warnings, "set");
    Frame f = frame();
    return CompactOpenSet::from_frame(f.ctx, f.v, f.M, f.digits);
  }

  DigitSet digit_set() const {
    Frame f = frame();
    return DigitSet(f.ctx, f.M, f.digits);
  }

  std::vector<std::string> warnings;

 private:
  static std::vector<std::int64_t> parse_comma_list(const std::string& text, const std::string& where) {
    std::vector<std::int64_t> out;
    std::stringstream in(text);
    std::string item;
    std::size_t index = 0;
    while (std::getline(in, item, ',')) {
      out.push_back(json_int(Json(item), where + "[" + std::to_string(index++) + "]"));
    }
    return out;
  }

  static std::int64_t inferred_depth(const PrimeContext& ctx, const std::vector<std::int64_t>& digits) {
    std::int64_t largest = 0;
    for (auto d : digits) largest = std::max(largest, d);
    std::int64_t M = 0;
    std::int64_t bound = 1;
    while (bound <= largest) {
      bound *= ctx.p();
      ++M;
    }
    return M;
  }

  const Json& req_;
  bool json_ = false;
};

struct Outcome {
  int exit_code = 0;
  Json doc;
  std::string human;
  std::vector<std::string> diagnostics;
};

std::string list_text(const std::vector<std::int64_t>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out + "}";
}

Json list_json(const std::vector<std::int64_t>& xs) {
  Json out = Json::array();
  for (auto x : xs) out.push_back(x);
  return out;
}

std::string set_text(const CompactOpenSet& omega) {
  return "p=" + std::to_string(omega.p()) + " v=" + std::to_string(omega.v()) + " M=" + std::to_string(omega.M()) +
         " digits=" + list_text(omega.digits());
}

std::string report_text(const PairReport& r) {
  std::ostringstream out;
  const Ball& w = r.verified_window;
  out << r.kind << " pair: " << (r.verified() ? "Verified on window" : "FailedAt") << " B(0, p^"
      << w.radius_exp() << ")\n";
  out << "checked points: " << r.checked_points << "\n";
  if (r.failure) {
    out << "xi: " << format_rational(r.failure->xi) << "\n";
    out << "lhs: " << to_json(r.failure->lhs).dump() << "\n";
    out << "rhs: " << format_rational(r.failure->rhs) << "\n";
  }
  return out.str();
}

std::pair<double, double> approximate(const ScaledCyclotomic& s) {
  double re = 0;
  double im = 0;
  const double modulus = static_cast<double>(s.sum.modulus());
  for (const auto& [j, a] : s.sum.coeffs()) {
    const double angle = 2 * std::numbers::pi * static_cast<double>(j) / modulus;
    re += a.convert_to<double>() * std::cos(angle);
    im += a.convert_to<double>() * std::sin(angle);
  }
  const double scale = std::pow(static_cast<double>(s.sum.context().p()), static_cast<double>(s.power));
  return {re * scale, im * scale};
}

void require_integral_frame(const Frame& f, std::string_view option) {
  if (f.v != 0) {
    fail(ErrorCode::InvalidArgument, std::string(option) + " lifts a witness of a digit set in Z/p^M and needs v = 0");
  }
}

UniformDiscreteSet spectrum_source(Session& s, const CompactOpenSet& omega, std::int64_t window) {
  if (s.has("elements")) return uniform_discrete_from_json(s.at("elements"));
  if (s.has("lift_spectrum")) {
    Frame f = s.frame();
    require_integral_frame(f, "lift_spectrum");
    return spectrum_lift(f.ctx, f.M, s.int_list("lift_spectrum"), std::max(window, omega.v() + omega.M()));
  }
  fail(ErrorCode::InvalidArgument, "a spectrum is required: give elements or lift_spectrum");
}

UniformDiscreteSet complement_source(Session& s, const CompactOpenSet& omega, std::int64_t window) {
  if (s.has("elements")) return uniform_discrete_from_json(s.at("elements"));
  if (s.has("lift_complement")) {
    Frame f = s.frame();
    require_integral_frame(f, "lift_complement");
    return complement_lift(f.ctx, s.int_list("lift_complement"), std::max(window, support_exponent(omega)));
  }
  fail(ErrorCode::InvalidArgument, "a tiling complement is required: give elements or lift_complement");
}

Outcome cmd_normalize(Session& s) {
  CompactOpenSet omega = s.compact_open();
  Outcome o;
  o.doc = to_json(omega);
  o.human = set_text(omega) + "\n";
  return o;
}

Outcome cmd_measure(Session& s) {
  CompactOpenSet omega = s.compact_open();
  Rational m = measure(omega);
  Outcome o;
  o.doc = Json{{"set", to_json(omega)}, {"measure", to_json(m)}};
  o.human = format_rational(m) + "\n";
  return o;
}

Outcome cmd_fourier(Session& s) {
  CompactOpenSet omega = s.compact_open();
  PAdicScalar xi(omega.context(), s.rational("xi", 0));
  ScaledCyclotomic f = indicator_fourier(omega, xi);
  auto [re, im] = approximate(f);
  Outcome o;
  o.doc = Json{{"set", to_json(omega)}, {"xi", to_json(xi.value())}, {"value", to_json(f)}, {"approx", {re, im}}};
  std::ostringstream h;
  h << "xi: " << format_rational(xi.value()) << "\n";
  if (auto q = f.as_rational()) {
    h << "value: " << format_rational(*q) << "\n";
  } else {
    h << "value: p^" << f.power << " * " << to_json(f.sum).dump() << "\n";
  }
  h << "approx: " << re << (im < 0 ? " - " : " + ") << std::abs(im) << "i\n";
  o.human = h.str();
  return o;
}

Outcome cmd_autocorr(Session& s) {
  CompactOpenSet omega = s.compact_open();
  PAdicScalar xi(omega.context(), s.rational("xi", 0));
  Rational a = autocorrelation(omega, xi);
  Outcome o;
  o.doc = Json{{"set", to_json(omega)}, {"xi", to_json(xi.value())}, {"autocorrelation", to_json(a)}};
  o.human = format_rational(a) + "\n";
  return o;
}

Outcome cmd_homogeneity(Session& s) {
  DigitSet set = s.digit_set();
  DigitTree tree = digit_tree(set.context(), set.M(), set.elements());
  Homogeneity h = is_p_homogeneous(tree);
  Json levels = Json::array();
  std::ostringstream text;
  text << "homogeneous: " << (h.homogeneous ? "yes" : "no") << "\n";
  if (h.homogeneous) text << "I: " << list_text(h.branching_levels) << "\n";
  text << "level  children\n";
  for (std::size_t i = 0; i < tree.child_counts.size(); ++i) {
    levels.push_back(list_json(tree.child_counts[i]));
    text << i << "      " << list_text(tree.child_counts[i]) << "\n";
  }
  Outcome o;
  o.exit_code = h.homogeneous ? 0 : 2;
  o.doc = Json{{"p", set.p()},
               {"M", set.M()},
               {"C", list_json(set.elements())},
               {"is_homogeneous", h.homogeneous},
               {"I", h.homogeneous ? list_json(h.branching_levels) : Json(nullptr)},
               {"child_counts", levels}};
  o.human = text.str();
  return o;
}

Outcome decision(const DigitSet& set, const std::optional<Witness>& w, const char* flag, const char* noun) {
  Outcome o;
  o.exit_code = w ? 0 : 2;
  o.doc = Json{{"p", set.p()}, {"M", set.M()}, {"C", list_json(set.elements())}, {flag, w.has_value()},
               {"witness", w ? list_json(w->elements) : Json(nullptr)}};
  o.human = std::string(flag) + ": " + (w ? "yes" : "no") + "\n";
  if (w) o.human += std::string(noun) + ": " + list_text(w->elements) + "\n";
  return o;
}

Outcome cmd_is_tile(Session& s) {
  DigitSet set = s.digit_set();
  return decision(set, is_tile_zmod(set), "is_tile", "complement");
}

Outcome cmd_is_spectral(Session& s) {
  DigitSet set = s.digit_set();
  return decision(set, is_spectral_zmod(set), "is_spectral", "spectrum");
}

Outcome construction(Session& s, bool spectrum) {
  DigitSet set = s.digit_set();
  Homogeneity h = is_p_homogeneous(set);
  Outcome o;
  if (!h.homogeneous) {
    o.exit_code = 2;
    o.doc = Json{{"p", set.p()}, {"M", set.M()}, {"C", list_json(set.elements())}, {"is_homogeneous", false}};
    o.human = "not p-homogeneous; no construction\n";
    return o;
  }
  Witness w = spectrum ? spectrum_from_homogeneity(set, h.branching_levels)
                       : complement_from_homogeneity(set, h.branching_levels);
  o.doc = Json{{"p", set.p()},
               {"M", set.M()},
               {"C", list_json(set.elements())},
               {"I", list_json(h.branching_levels)},
               {spectrum ? "spectrum" : "complement", list_json(w.elements)}};
  o.human = "I: " + list_text(h.branching_levels) + "\n" + (spectrum ? "spectrum: " : "complement: ") +
            list_text(w.elements) + "\n";
  if (s.has("window")) {
    std::int64_t window = s.integer("window");
    UniformDiscreteSet lift = spectrum ? spectrum_lift(set.context(), set.M(), w.elements, window)
                                       : complement_lift(set.context(), w.elements, window);
    o.doc["lift"] = to_json(lift);
    o.human += "lift on B(0, p^" + std::to_string(window) + "): " + std::to_string(lift.size()) + " points\n";
  }
  return o;
}

Outcome pair_outcome(const PairReport& r) {
  Outcome o;
  o.exit_code = r.verified() ? 0 : 2;
  o.doc = to_json(r);
  o.human = report_text(r);
  return o;
}

Outcome cmd_verify_tiling(Session& s) {
  CompactOpenSet omega = s.compact_open();
  std::int64_t window = s.integer("window", 3);
  return pair_outcome(verify_tiling_pair(omega, complement_source(s, omega, window), window));
}

Outcome cmd_verify_spectral(Session& s) {
  CompactOpenSet omega = s.compact_open();
  std::int64_t window = s.integer("window", 3);
  return pair_outcome(verify_spectral_pair(omega, spectrum_source(s, omega, window), window));
}

Outcome cmd_spectrum_to_tiling(Session& s) {
  CompactOpenSet omega = s.compact_open();
  std::int64_t window = s.integer("window", 3);
  SpectrumToTiling r = spectrum_to_tiling_complement(omega, spectrum_source(s, omega, window), window);
  Outcome o = pair_outcome(r.report);
  o.doc = Json{{"set", to_json(omega)},
               {"n_f", r.n_f},
               {"I", list_json(r.branching_levels)},
               {"J", list_json(r.free_levels)},
               {"U", list_json(r.complement)},
               {"report", to_json(r.report)}};
  o.human = "n_f: " + std::to_string(r.n_f) + "\nI: " + list_text(r.branching_levels) +
            "\nJ: " + list_text(r.free_levels) + "\nU: " + list_text(r.complement) + "\n" + o.human;
  return o;
}

Outcome cmd_scan_zeros(Session& s) {
  UniformDiscreteSet e = uniform_discrete_from_json(s.at("elements"));
  TruncationRange truncation{s.integer("trunc_lo", first_occupied_truncation(e)),
                             s.integer("trunc_hi", e.window_exp())};
  std::int64_t lo = s.integer("level_lo", -(e.window_exp() + 2));
  std::int64_t hi = s.integer("level_hi", e.window_exp() + 2);
  if (lo > hi) fail(ErrorCode::InvalidArgument, "level_lo exceeds level_hi");
  auto scan = zero_sphere_scan(e, lo, hi, truncation);
  auto n_e = e.separation_exponent();
  bool bound = zero_bound_check(e);

  Outcome o;
  Json spheres = Json::array();
  std::ostringstream h;
  h << "truncations: " << truncation.lo << ".." << truncation.hi << "\n";
  h << "level  radius     status\n";
  for (const auto& [level, status] : scan) {
    spheres.push_back(Json{{"level", level}, {"status", sphere_status_name(status)}});
    h << level << "      p^" << -level << "     " << sphere_status_name(status) << "\n";
  }
  o.doc = Json{{"p", e.p()},
               {"truncation", {truncation.lo, truncation.hi}},
               {"spheres", spheres},
               {"n_E", n_e ? Json(*n_e) : Json(nullptr)},
               {"zero_bound_check", bound}};
  h << "n_E: " << (n_e ? std::to_string(*n_e) : "undefined (singleton)") << "\n";
  h << "zero bound check: " << (bound ? "pass" : "fail") << "\n";
  if (!n_e) o.diagnostics.push_back("note: n_E is undefined for a singleton; the zero bound check holds vacuously");
  o.human = h.str();
  return o;
}

Outcome cmd_density(Session& s) {
  UniformDiscreteSet e = uniform_discrete_from_json(s.at("elements"));
  PAdicScalar x0(e.context(), s.rational("x0", 0));
  auto rows = density(e, x0, s.integer("k_lo", first_occupied_truncation(e)), s.integer("k_hi", e.window_exp()));
  Outcome o;
  Json table = Json::array();
  std::ostringstream h;
  h << "k      ratio\n";
  for (const auto& [k, ratio] : rows) {
    table.push_back(Json{{"k", k}, {"ratio", to_json(ratio)}});
    h << k << "      " << format_rational(ratio) << "\n";
  }
  o.doc = Json{{"p", e.p()}, {"x0", to_json(x0.value())}, {"density", table}};
  if (s.has("uniform_n")) {
    std::vector<PAdicScalar> probes;
    for (const auto& q : s.rational_list("probes")) probes.emplace_back(e.context(), q);
    bool uniform = uniformity_check(e, s.integer("uniform_n"), probes);
    o.doc["uniform"] = uniform;
    h << "uniform at n=" << s.integer("uniform_n") << ": " << (uniform ? "yes" : "no") << "\n";
    o.exit_code = uniform ? 0 : 2;
  }
  o.human = h.str();
  return o;
}

std::string census_table(const Census& c) {
  std::ostringstream h;
  h << "census p=" << c.p << " M=" << c.M << " (" << c.mode << "), " << c.records.size() << " sets\n";
  h << "|C|    total  tiles  spectral  homogeneous\n";
  for (const auto& [k, row] : c.by_cardinality) {
    h << k << "      " << row.total << "      " << row.tiles << "      " << row.spectral << "         "
      << row.homogeneous << "\n";
  }
  h << "disagreements: " << c.disagreements.size() << "\n";
  h << "cardinality violations: " << c.cardinality_violations.size() << "\n";
  h << "witness failures: " << c.witness_failures.size() << "\n";
  h << "formula mismatches: " << c.formula_mismatches.size() << "\n";
  return h.str();
}

std::string jsonl(const Census& c) {
  std::string out;
  for (const auto& r : c.records) out += to_json(r).dump() + "\n";
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing: " + std::strerror(errno));
  out << content;
  out.close();
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string() + ": " + std::strerror(errno));
}

Outcome cmd_classify(Session& s) {
  PrimeContext ctx = s.prime();
  CensusOptions options;
  options.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
  std::int64_t jobs = s.integer("jobs", 1);
  if (jobs < 1) fail(ErrorCode::InvalidArgument, "jobs must be positive");
  options.jobs = static_cast<unsigned>(jobs);

  std::vector<CensusRecord> inputs;
  std::int64_t M = 0;
  if (s.has("input")) {
    const Json& list = s.at("input");
    if (!list.is_array()) fail(ErrorCode::Parse, "field 'request.input': expected census records");
    std::int64_t largest = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      inputs.push_back(census_record_from_json(list[i], "input[" + std::to_string(i) + "]"));
      options.sets.push_back(inputs.back().set);
      for (auto d : inputs.back().set) largest = std::max(largest, d);
    }
    options.mode = CensusMode::List;
    std::int64_t inferred = 0;
    for (std::int64_t bound = 1; bound <= largest; bound *= ctx.p()) ++inferred;
    M = s.integer("M", inferred);
  } else {
    M = s.integer("M");
    if (s.has("sample")) {
      options.mode = CensusMode::Sample;
      options.sample_count = s.integer("sample");
    }
  }
  Census census = classify_all(ctx, M, options);

  Outcome o;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const CensusRecord& a = inputs[i];
    const CensusRecord& b = census.records[i];
    if (a.is_tile != b.is_tile || a.is_spectral != b.is_spectral || a.is_homogeneous != b.is_homogeneous) {
      o.diagnostics.push_back("flag mismatch for C=" + list_text(a.set));
      o.exit_code = 2;
    }
  }
  if (census.has_fatal_findings()) o.exit_code = 2;
  if (s.has("output")) write_file(s.at("output").get<std::string>(), jsonl(census));

  o.doc = census_summary_to_json(census);
  o.human = census_table(census);
  if (s.json_mode()) {
    // JSON-lines: one record per line, then the summary.
    o.human = jsonl(census) + Json{{"summary", o.doc}}.dump() + "\n";
  }
  return o;
}

const std::vector<std::pair<std::int64_t, std::int64_t>> kGalleryScopes = {{2, 1}, {2, 2}, {2, 3},
                                                                           {2, 4}, {3, 1}, {3, 2}};

struct GallerySet {
  const char* name;
  std::int64_t p;
  std::int64_t M;
  std::vector<std::int64_t> digits;
};

const std::vector<GallerySet> kGalleryPipelines = {
    {"pipeline_p2_M2_0-3.json", 2, 2, {0, 3}},
    {"pipeline_p2_M3_0-1-4-5.json", 2, 3, {0, 1, 4, 5}},
    {"pipeline_p3_M2_0-4-8.json", 3, 2, {0, 4, 8}},
};

Outcome cmd_gallery(Session& s) {
  std::string dir = s.at("dir").get<std::string>();
  write_gallery(dir);
  Outcome o;
  Json files = Json::array();
  for (auto [p, M] : kGalleryScopes) {
    files.push_back("census_p" + std::to_string(p) + "_M" + std::to_string(M) + ".jsonl");
  }
  files.push_back("summary.md");
  for (const auto& g : kGalleryPipelines) files.push_back(g.name);
  o.doc = Json{{"dir", dir}, {"files", files}};
  for (const auto& f : files) o.human += (std::filesystem::path(dir) / f.get<std::string>()).string() + "\n";
  return o;
}

using Handler = std::function<Outcome(Session&)>;

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table = {
      {"normalize", cmd_normalize},
      {"measure", cmd_measure},
      {"fourier", cmd_fourier},
      {"autocorr", cmd_autocorr},
      {"homogeneity", cmd_homogeneity},
      {"is-tile", cmd_is_tile},
      {"is-spectral", cmd_is_spectral},
      {"make-spectrum", [](Session& s) { return construction(s, true); }},
      {"make-complement", [](Session& s) { return construction(s, false); }},
      {"verify-tiling", cmd_verify_tiling},
      {"verify-spectral", cmd_verify_spectral},
      {"spectrum-to-tiling", cmd_spectrum_to_tiling},
      {"scan-zeros", cmd_scan_zeros},
      {"density", cmd_density},
      {"classify", cmd_classify},
      {"gallery", cmd_gallery},
  };
  return table;
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConstructionFailed: return 2;
    case ErrorCode::WindowTooSmall:
    case ErrorCode::NotASpectrumEvidence: return 3;
    default: return 1;
  }
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, handler] : handlers()) out.push_back(name);
    return out;
  }();
  return names;
}

CommandResult run_command(std::string_view name, const Json& request) {
  CommandResult result;
  auto it = handlers().find(name);
  if (it == handlers().end()) {
    result.exit_code = 1;
    result.diagnostics = "error: unknown command '" + std::string(name) + "'\n";
    return result;
  }
  try {
    Session session(request);
    Outcome o = it->second(session);
    result.exit_code = o.exit_code;
    if (session.json_mode() && name == "classify") {
      result.output = o.human;
    } else {
      result.output = session.json_mode() ? o.doc.dump(2) + "\n" : o.human;
    }
    for (const auto& w : session.warnings) result.diagnostics += w + "\n";
    for (const auto& d : o.diagnostics) result.diagnostics += d + "\n";
  } catch (const Error& e) {
    result.exit_code = exit_code_for(e.code());
    result.diagnostics += std::string("error: ") + error_code_name(e.code()) + ": " + e.what() + "\n";
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.diagnostics += std::string("error: ") + e.what() + "\n";
  }
  return result;
}

Json pipeline_trace(const DigitSet& set, std::int64_t window_exp) {
  const PrimeContext& ctx = set.context();
  Homogeneity h = is_p_homogeneous(set);
  if (!h.homogeneous) fail(ErrorCode::InvalidArgument, "pipeline traces need a p-homogeneous set");
  CompactOpenSet omega = set.as_compact_open();
  Witness w = spectrum_from_homogeneity(set, h.branching_levels);
  UniformDiscreteSet lambda = spectrum_lift(ctx, set.M(), w.elements, std::max(window_exp, set.M()));
  PairReport spectral = verify_spectral_pair(omega, lambda, window_exp);
  SpectrumToTiling built = spectrum_to_tiling_complement(omega, lambda, window_exp);

  Json scan = Json::array();
  for (const auto& [level, status] : zero_sphere_scan(lambda, 0, built.n_f - 1, {built.n_f, lambda.window_exp()})) {
    scan.push_back(Json{{"level", level}, {"status", sphere_status_name(status)}});
  }
  Json rows = Json::array();
  for (const auto& [k, ratio] : density(lambda, PAdicScalar(ctx, 0), built.n_f, lambda.window_exp())) {
    rows.push_back(Json{{"k", k}, {"ratio", to_json(ratio)}});
  }
  const Rational covered = Rational(static_cast<std::int64_t>(built.complement.size())) * measure(omega);
  return Json{{"set", to_json(omega)},
              {"C", list_json(set.elements())},
              {"tree_I", list_json(h.branching_levels)},
              {"spectrum_witness", list_json(w.elements)},
              {"spectrum", to_json(lambda)},
              {"spectral_report", to_json(spectral)},
              {"n_f", built.n_f},
              {"spheres", scan},
              {"I", list_json(built.branching_levels)},
              {"J", list_json(built.free_levels)},
              {"U", list_json(built.complement)},
              {"card_U_times_measure", to_json(covered)},
              {"density", rows},
              {"tiling_report", to_json(built.report)}};
}

void write_gallery(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir + ": " + ec.message());

  std::ostringstream summary;
  summary << "# Census summary\n\n";
  summary << "| p | M | sets | tiles | spectral | homogeneous | disagreements |\n";
  summary << "|---|---|------|-------|----------|-------------|---------------|\n";
  std::ostringstream branching;
  for (auto [p, M] : kGalleryScopes) {
    Census c = classify_all(PrimeContext(p), M, CensusOptions{});
    write_file(fs::path(dir) / ("census_p" + std::to_string(p) + "_M" + std::to_string(M) + ".jsonl"), jsonl(c));
    std::int64_t tiles = 0, spectral = 0, homogeneous = 0;
    for (const auto& r : c.records) {
      tiles += r.is_tile;
      spectral += r.is_spectral;
      homogeneous += r.is_homogeneous;
    }
    summary << "| " << p << " | " << M << " | " << c.records.size() << " | " << tiles << " | " << spectral << " | "
            << homogeneous << " | " << c.disagreements.size() << " |\n";
    branching << "\n## p = " << p << ", M = " << M << "\n\n| I | sets | formula |\n|---|------|---------|\n";
    for (const auto& [levels, row] : c.by_branching) {
      branching << "| " << list_text(levels) << " | " << row.observed << " | "
                << (row.formula ? row.formula->str() : std::string("-")) << " |\n";
    }
  }
  summary << "\n# Homogeneous sets by branching levels\n" << branching.str();
  summary << "\n# Pipeline traces\n\n";
  for (const auto& g : kGalleryPipelines) {
    Json trace = pipeline_trace(DigitSet(PrimeContext(g.p), g.M, g.digits), 3);
    write_file(fs::path(dir) / g.name, trace.dump(2) + "\n");
    summary << "- `" << g.name << "`: C = " << list_text(g.digits) << ", p = " << g.p << ", M = " << g.M
            << ", U = " << list_text(trace["U"].get<std::vector<std::int64_t>>()) << ", tiling "
            << trace["tiling_report"]["status"].get<std::string>() << "\n";
  }
  write_file(fs::path(dir) / "summary.md", summary.str());
}

}  // namespace fuglede
