#pragma once

#include <stdexcept>
#include <string>

namespace fuglede {

enum class ErrorCode {
  InvalidArgument,
  NotPrime,
  EmptySet,
  NotVanishing,
  NotIndicator,
  ConstructionFailed,
  ScopeTooLarge,
  WindowTooSmall,
  NotASpectrumEvidence,
  NonRepresentable,
  Overflow,
  Parse,
  Io,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fuglede
