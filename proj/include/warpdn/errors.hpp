#pragma once

#include <stdexcept>
#include <string>

namespace warpdn {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  NotIntegrable,
  SingularityTooStrong,
  Pole,
  BracketingFailed,
  Admissibility,
  BlowUp,
  Degenerate,
  Unsupported,
  Numeric,
  Io,
};

/// Library-wide exception. Carries a coarse error code so the C boundary
/// can translate failures without string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) {
  throw Error(c, msg);
}

}  // namespace warpdn
