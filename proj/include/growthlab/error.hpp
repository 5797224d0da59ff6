#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain = 2,    // evaluation outside the region where a value is defined
  Config = 3,
  Resource = 4,
  Internal = 5,
};

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

}  // namespace growthlab
