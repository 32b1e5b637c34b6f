#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wlmp {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorCode : int {
  invalid_argument = 2,
  parse = 3,
  degenerate_input = 4,
  disconnected = 5,
  out_of_range = 6,
  ambiguous_anchor = 7,
  shape_mismatch = 8,
  missing_pairs = 9,
  unknown_label = 10,
  size_mismatch = 11,
  io = 12,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wlmp
