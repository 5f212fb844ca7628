#include "fuglede.h"

#include <cstring>
#include <new>
#include <string>

#include "core/commands.hpp"
#include "core/decide.hpp"
#include "core/serialize.hpp"

struct fgl_set {
  fuglede::CompactOpenSet value;
};

struct fgl_result {
  fuglede::CommandResult value;
};

namespace {

thread_local std::string last_error;

fgl_status status_of(fuglede::ErrorCode code) {
  using fuglede::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return FGL_INVALID_ARGUMENT;
    case ErrorCode::NotPrime: return FGL_NOT_PRIME;
    case ErrorCode::EmptySet: return FGL_EMPTY_SET;
    case ErrorCode::NotVanishing: return FGL_NOT_VANISHING;
    case ErrorCode::NotIndicator: return FGL_NOT_INDICATOR;
    case ErrorCode::ConstructionFailed: return FGL_CONSTRUCTION_FAILED;
    case ErrorCode::ScopeTooLarge: return FGL_SCOPE_TOO_LARGE;
    case ErrorCode::WindowTooSmall: return FGL_WINDOW_TOO_SMALL;
    case ErrorCode::NotASpectrumEvidence: return FGL_NOT_A_SPECTRUM_EVIDENCE;
    case ErrorCode::NonRepresentable: return FGL_NON_REPRESENTABLE;
    case ErrorCode::Overflow: return FGL_OVERFLOW;
    case ErrorCode::Parse: return FGL_PARSE_ERROR;
    case ErrorCode::Io: return FGL_IO_ERROR;
  }
  return FGL_INTERNAL_ERROR;
}

template <class F>
fgl_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FGL_OK;
  } catch (const fuglede::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FGL_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FGL_INTERNAL_ERROR;
  }
}

fgl_status null_argument(const char* name) {
  last_error = std::string(name) + " must not be null";
  return FGL_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fuglede::DigitSet digit_set_of(const fgl_set* set) {
  const auto& omega = set->value;
  return fuglede::DigitSet(omega.context(), omega.M(), omega.digits());
}

}  // namespace

extern "C" {

const char* fgl_version(void) { return "0.1.0"; }

const char* fgl_status_name(fgl_status status) {
  switch (status) {
    case FGL_OK: return "ok";
    case FGL_INVALID_ARGUMENT: return "invalid argument";
    case FGL_NOT_PRIME: return "not prime";
    case FGL_EMPTY_SET: return "empty set";
    case FGL_NOT_VANISHING: return "not vanishing";
    case FGL_NOT_INDICATOR: return "not an indicator sum";
    case FGL_CONSTRUCTION_FAILED: return "construction failed";
    case FGL_SCOPE_TOO_LARGE: return "scope too large";
    case FGL_WINDOW_TOO_SMALL: return "window too small";
    case FGL_NOT_A_SPECTRUM_EVIDENCE: return "not a spectrum evidence";
    case FGL_NON_REPRESENTABLE: return "non representable";
    case FGL_OVERFLOW: return "overflow";
    case FGL_PARSE_ERROR: return "parse error";
    case FGL_IO_ERROR: return "io error";
    case FGL_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

const char* fgl_last_error_message(void) { return last_error.c_str(); }

void fgl_string_free(char* s) { delete[] s; }

fgl_status fgl_set_create(int64_t p, int64_t v, int64_t M, const int64_t* digits, size_t count, fgl_set** out) {
  if (!out) return null_argument("out");
  if (!digits && count > 0) return null_argument("digits");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::int64_t> list(digits, digits + count);
    auto omega = fuglede::CompactOpenSet::from_frame(fuglede::PrimeContext(p), v, M, std::move(list));
    *out = new fgl_set{std::move(omega)};
  });
}

fgl_status fgl_set_from_json(const char* json, fgl_set** out) {
  if (!out) return null_argument("out");
  if (!json) return null_argument("json");
  *out = nullptr;
  return guarded([&] {
    auto doc = fuglede::parse_json_text(json, "set");
    *out = new fgl_set{fuglede::compact_open_from_json(doc, nullptr)};
  });
}

void fgl_set_destroy(fgl_set* set) { delete set; }

fgl_status fgl_set_to_json(const fgl_set* set, char** out) {
  if (!set) return null_argument("set");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(fuglede::to_json(set->value).dump()); });
}

fgl_status fgl_set_frame(const fgl_set* set, int64_t* p, int64_t* v, int64_t* M, size_t* digit_count) {
  if (!set) return null_argument("set");
  if (p) *p = set->value.p();
  if (v) *v = set->value.v();
  if (M) *M = set->value.M();
  if (digit_count) *digit_count = set->value.digits().size();
  last_error.clear();
  return FGL_OK;
}

fgl_status fgl_set_digits(const fgl_set* set, int64_t* digits, size_t capacity) {
  if (!set) return null_argument("set");
  const auto& d = set->value.digits();
  if (capacity < d.size() || !digits) {
    last_error = "digit buffer holds " + std::to_string(capacity) + " entries, need " + std::to_string(d.size());
    return FGL_INVALID_ARGUMENT;
  }
  std::copy(d.begin(), d.end(), digits);
  last_error.clear();
  return FGL_OK;
}

fgl_status fgl_set_measure(const fgl_set* set, char** out) {
  if (!set) return null_argument("set");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(fuglede::format_rational(fuglede::measure(set->value))); });
}

fgl_status fgl_set_contains(const fgl_set* set, const char* x, int* contained) {
  if (!set) return null_argument("set");
  if (!x) return null_argument("x");
  if (!contained) return null_argument("contained");
  return guarded([&] {
    fuglede::PAdicScalar point(set->value.context(), fuglede::parse_rational(x));
    *contained = set->value.contains(point) ? 1 : 0;
  });
}

fgl_status fgl_set_is_tile(const fgl_set* set, int* is_tile) {
  if (!set) return null_argument("set");
  if (!is_tile) return null_argument("is_tile");
  return guarded([&] { *is_tile = fuglede::is_tile_zmod(digit_set_of(set)).has_value() ? 1 : 0; });
}

fgl_status fgl_set_is_spectral(const fgl_set* set, int* is_spectral) {
  if (!set) return null_argument("set");
  if (!is_spectral) return null_argument("is_spectral");
  return guarded([&] { *is_spectral = fuglede::is_spectral_zmod(digit_set_of(set)).has_value() ? 1 : 0; });
}

fgl_status fgl_set_homogeneity(const fgl_set* set, int* homogeneous, int64_t* levels, size_t capacity,
                               size_t* level_count) {
  if (!set) return null_argument("set");
  if (!homogeneous) return null_argument("homogeneous");
  return guarded([&] {
    auto h = fuglede::is_p_homogeneous(set->value);
    *homogeneous = h.homogeneous ? 1 : 0;
    if (level_count) *level_count = h.branching_levels.size();
    for (std::size_t i = 0; i < h.branching_levels.size() && i < capacity && levels; ++i) {
      levels[i] = h.branching_levels[i];
    }
  });
}

fgl_status fgl_execute(const char* command, const char* request_json, fgl_result** out) {
  if (!out) return null_argument("out");
  if (!command) return null_argument("command");
  *out = nullptr;
  return guarded([&] {
    fuglede::CommandResult r;
    try {
      auto request = fuglede::parse_json_text(request_json ? request_json : "{}", "request");
      r = fuglede::run_command(command, request);
    } catch (const fuglede::Error& e) {
      r.exit_code = fuglede::exit_code_for(e.code());
      r.diagnostics = std::string("error: ") + fuglede::error_code_name(e.code()) + ": " + e.what() + "\n";
    }
    *out = new fgl_result{std::move(r)};
  });
}

int fgl_result_exit_code(const fgl_result* result) { return result ? result->value.exit_code : 1; }

const char* fgl_result_output(const fgl_result* result) { return result ? result->value.output.c_str() : ""; }

const char* fgl_result_diagnostics(const fgl_result* result) {
  return result ? result->value.diagnostics.c_str() : "";
}

void fgl_result_destroy(fgl_result* result) { delete result; }

}  // extern "C"
