#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace uc {

// Error taxonomy mirrored by the C API status codes and CLI exit codes.
enum class ErrorCode {
  InvalidInput = 1,  // malformed data, out-of-range arguments, size caps
  Hypothesis = 2,    // a construction's precondition does not hold for the input
  Verification = 3,  // a certificate failed its re-check
  Internal = 4,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail_input(const std::string& msg) {
  throw Error(ErrorCode::InvalidInput, msg);
}
[[noreturn]] inline void fail_hypothesis(const std::string& msg) {
  throw Error(ErrorCode::Hypothesis, msg);
}
[[noreturn]] inline void fail_verification(const std::string& msg) {
  throw Error(ErrorCode::Verification, msg);
}
[[noreturn]] inline void fail_internal(const std::string& msg) {
  throw Error(ErrorCode::Internal, msg);
}

}  // namespace uc
