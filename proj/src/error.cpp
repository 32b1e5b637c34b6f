#include "wlmp/error.hpp"

namespace wlmp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::ambiguous_anchor: return "ambiguous_anchor";
    case ErrorCode::shape_mismatch: return "shape_mismatch";
    case ErrorCode::missing_pairs: return "missing_pairs";
    case ErrorCode::unknown_label: return "unknown_label";
    case ErrorCode::size_mismatch: return "size_mismatch";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace wlmp
