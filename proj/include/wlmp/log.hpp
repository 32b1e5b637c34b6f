#pragma once

#include <memory>

namespace spdlog {
class logger;
}

namespace wlmp {

/// Library-wide logger. Level comes from the WLMP_LOG environment variable
/// (trace, debug, info, warn, error, off); default is warn.
std::shared_ptr<spdlog::logger> logger();

}  // namespace wlmp
