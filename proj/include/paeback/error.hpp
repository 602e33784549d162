#pragma once

#include <stdexcept>
#include <string>

namespace paeback {

/// Failure categories. The C API maps these one-to-one onto pb_status codes.
enum class ErrorCode {
  InvalidArgument = 1,
  Io,
  Parse,
  InsufficientData,
  Singular,
  NotStationary,
  Convergence,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace paeback
