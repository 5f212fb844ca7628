// Command-line front end. Every subcommand is turned into a JSON request and
// handed to fgl_execute from the shared library.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fuglede.h"

namespace {

using Json = nlohmann::ordered_json;

enum class Kind { Int, Text, List, Doc, Lines, Flag };

struct Option {
  const char* flag;
  const char* key;
  Kind kind;
  const char* help;
};

const std::vector<Option> kOptions = {
    {"--p", "p", Kind::Int, "prime p"},
    {"--v", "v", Kind::Int, "frame offset v (default 0)"},
    {"--M", "M", Kind::Int, "frame depth M (default: smallest M with every digit < p^M)"},
    {"--set", "set", Kind::Doc, "digit set: comma list 0,3 or JSON; a set document inline or as @FILE (@- for stdin)"},
    {"--xi", "xi", Kind::Text, "frequency as a rational a/b"},
    {"--window", "window", Kind::Int, "window exponent: work on B(0, p^window) (default 3)"},
    {"--elements", "elements", Kind::Doc, "uniformly discrete set document, inline or @FILE"},
    {"--lift-spectrum", "lift_spectrum", Kind::List, "spectrum W of the digit set, lifted to p^-M (W + L)"},
    {"--lift-complement", "lift_complement", Kind::List, "tiling complement U of the digit set, lifted to U + L"},
    {"--level-lo", "level_lo", Kind::Int, "lowest sphere level n (sphere S(0, p^-n))"},
    {"--level-hi", "level_hi", Kind::Int, "highest sphere level n"},
    {"--trunc-lo", "trunc_lo", Kind::Int, "lowest truncation exponent k for sums over E ∩ B(0, p^k)"},
    {"--trunc-hi", "trunc_hi", Kind::Int, "highest truncation exponent k"},
    {"--x0", "x0", Kind::Text, "ball center for density ratios (default 0)"},
    {"--k-lo", "k_lo", Kind::Int, "smallest ball exponent for density ratios"},
    {"--k-hi", "k_hi", Kind::Int, "largest ball exponent for density ratios"},
    {"--uniform-n", "uniform_n", Kind::Int, "also check Card(E ∩ B(probe, p^n)) = p^n D(E) at this n"},
    {"--probes", "probes", Kind::List, "probe centers for --uniform-n, comma list of rationals"},
    {"--exhaustive", "exhaustive", Kind::Flag, "classify every nonempty subset (default)"},
    {"--sample", "sample", Kind::Int, "classify this many random subsets instead"},
    {"--seed", "seed", Kind::Int, "random seed for --sample (default 0)"},
    {"--jobs", "jobs", Kind::Int, "worker threads; output order does not depend on it (default 1)"},
    {"--input", "input", Kind::Lines, "census JSON-lines file to re-classify (@- or - for stdin)"},
    {"--output", "output", Kind::Text, "also write census records as JSON-lines to this file"},
    {"--dir", "dir", Kind::Text, "output directory"},
};

struct Command {
  const char* name;
  const char* help;
  std::vector<std::string> options;
};

const std::vector<Command> kCommands = {
    {"normalize", "canonical form of a compact open set", {"--p", "--v", "--M", "--set"}},
    {"measure", "Haar measure of a compact open set", {"--p", "--v", "--M", "--set"}},
    {"fourier", "exact Fourier transform of the indicator at xi", {"--p", "--v", "--M", "--set", "--xi"}},
    {"autocorr", "m(Omega ∩ (Omega + xi))", {"--p", "--v", "--M", "--set", "--xi"}},
    {"homogeneity", "digit tree and p-homogeneity of a digit set", {"--p", "--M", "--set"}},
    {"is-tile", "decide whether a digit set tiles Z/p^M", {"--p", "--M", "--set"}},
    {"is-spectral", "decide whether a digit set is spectral in Z/p^M", {"--p", "--M", "--set"}},
    {"make-spectrum", "spectrum of a p-homogeneous digit set", {"--p", "--M", "--set", "--window"}},
    {"make-complement", "tiling complement of a p-homogeneous digit set", {"--p", "--M", "--set", "--window"}},
    {"verify-tiling",
     "check that Omega + T tiles the window",
     {"--p", "--v", "--M", "--set", "--window", "--elements", "--lift-complement"}},
    {"verify-spectral",
     "check the spectral identity on the window",
     {"--p", "--v", "--M", "--set", "--window", "--elements", "--lift-spectrum"}},
    {"spectrum-to-tiling",
     "build a tiling complement from zero spheres of a spectrum",
     {"--p", "--v", "--M", "--set", "--window", "--elements", "--lift-spectrum"}},
    {"scan-zeros",
     "classify spheres S(0, p^-n) against the zero set of a discrete measure",
     {"--elements", "--level-lo", "--level-hi", "--trunc-lo", "--trunc-hi"}},
    {"density",
     "density ratios Card(E ∩ B(x0, p^k)) / p^k",
     {"--elements", "--x0", "--k-lo", "--k-hi", "--uniform-n", "--probes"}},
    {"classify",
     "census of subsets of Z/p^M",
     {"--p", "--M", "--exhaustive", "--sample", "--seed", "--jobs", "--input", "--output"}},
    {"gallery", "write the example censuses, summary and pipeline traces", {"--dir"}},
};

const char* kSchemas = R"(Exit codes: 0 success or verified, 1 usage/parse/IO error, 2 property failed
(non-tile, non-spectral, non-homogeneous, FailedAt), 3 window too small or
inconsistent spectrum evidence.

Documents (rationals are strings "a/b"):
  compact open set   {"p": 2, "v": 0, "M": 2, "digits": [0, 3]}
                     = p^v (digits + p^M Z_p); re-normalized on load.
  ball               {"v": 0, "M": 2, "c": 3}
  cyclotomic sum     {"p": 2, "n": 2, "coeffs": {"1": "1", "3": "-1"}}
                     = sum of a_j e^{2 pi i j / p^n}
  discrete set       {"p": 2, "window_exp": 3, "elements": ["0/1", "1/2"]}
                     = E ∩ B(0, p^window_exp), listed completely.
  census record      {"C": [...], "is_tile": b, "is_spectral": b, "is_homogeneous": b,
                      "I": [...], "witness_T": [...]|null, "witness_Lambda": [...]|null}

Lifts of witnesses of a digit set C in Z/p^M (frame v = 0), with
L = {j / p^k : 0 <= j < p^k} the representatives of Q_p / Z_p:
  tiling complement U  ->  (U + L) ∩ B(0, p^w)
  spectrum W           ->  p^-M (W + L) ∩ B(0, p^w)
where w is the larger of --window and the margin the check needs.

Randomized modes use --seed, default 0. Output never uses color, so
NO_COLOR has nothing to turn off.)";

std::string read_source(const std::string& path) {
  std::ostringstream buffer;
  if (path == "-") {
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read " + path);
  buffer << in.rdbuf();
  return buffer.str();
}

Json parse_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CLI::ValidationError(what + ": invalid JSON at byte " + std::to_string(e.byte));
  }
}

Json convert(const Option& opt, const std::string& raw) {
  switch (opt.kind) {
    case Kind::Int:
    case Kind::Text:
      if (opt.kind == Kind::Int) {
        std::size_t used = 0;
        long long value = 0;
        try {
          value = std::stoll(raw, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != raw.size() || raw.empty()) throw CLI::ValidationError(std::string(opt.flag) + ": expected an integer, got '" + raw + "'");
        return Json(static_cast<std::int64_t>(value));
      }
      return Json(raw);
    case Kind::List:
      if (!raw.empty() && raw.front() == '[') return parse_text(raw, opt.flag);
      return Json(raw);
    case Kind::Doc:
      if (!raw.empty() && raw.front() == '@') return parse_text(read_source(raw.substr(1)), raw.substr(1));
      if (!raw.empty() && (raw.front() == '{' || raw.front() == '[')) return parse_text(raw, opt.flag);
      if (opt.key == std::string("set")) return Json(raw);
      return parse_text(read_source(raw), raw);
    case Kind::Lines: {
      std::string path = !raw.empty() && raw.front() == '@' ? raw.substr(1) : raw;
      std::istringstream in(read_source(path));
      Json records = Json::array();
      std::string line;
      std::size_t number = 0;
      while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        records.push_back(parse_text(line, path + " line " + std::to_string(number)));
      }
      return records;
    }
    case Kind::Flag:
      return Json(true);
  }
  return Json(nullptr);
}

const Option& option(const std::string& flag) {
  for (const auto& o : kOptions) {
    if (flag == o.flag) return o;
  }
  throw std::logic_error("unknown option " + flag);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact spectral and tiling analysis of compact open sets in Q_p and digit sets in Z/p^M"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  bool json_output = false;
  app.add_flag("--json", json_output, "machine-readable JSON on stdout");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subcommands;
  for (const auto& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_flag("--json", json_output, "machine-readable JSON on stdout");
    subcommands[cmd.name] = sub;
    for (const auto& flag : cmd.options) {
      const Option& o = option(flag);
      if (o.kind == Kind::Flag) {
        sub->add_flag(o.flag, flags[cmd.name][o.key], o.help);
      } else {
        sub->add_option(o.flag, values[cmd.name][o.key], o.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  for (const auto& cmd : kCommands) {
    CLI::App* sub = subcommands[cmd.name];
    if (!sub->parsed()) continue;
    Json request = Json::object();
    request["json"] = json_output;
    try {
      for (const auto& flag : cmd.options) {
        const Option& o = option(flag);
        if (sub->count(o.flag) == 0) continue;
        request[o.key] = o.kind == Kind::Flag ? Json(true) : convert(o, values[cmd.name][o.key]);
      }
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }

    fgl_result* result = nullptr;
    if (fgl_execute(cmd.name, request.dump().c_str(), &result) != FGL_OK) {
      std::cerr << "error: " << fgl_last_error_message() << "\n";
      return 1;
    }
    std::cout << fgl_result_output(result);
    std::cerr << fgl_result_diagnostics(result);
    int code = fgl_result_exit_code(result);
    fgl_result_destroy(result);
    return code;
  }
  return 1;
}
