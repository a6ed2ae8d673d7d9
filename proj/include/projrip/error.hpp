#pragma once

#include <stdexcept>
#include <string>

namespace projrip {

enum class ErrorCode {
  RankDeficient,
  NotSymmetric,
  ShapeMismatch,
  NonFinite,
  BadDimensions,
  NoConvergence,
  DegeneratePair,
  Unsatisfiable,
  BadFormat,
  NotProjection,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace projrip
