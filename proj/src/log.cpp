#include "wlmp/log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace wlmp {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto log = spdlog::stderr_color_mt("wlmp");
    log->set_pattern("[%l] %v");
    auto level = spdlog::level::warn;
    if (const char* env = std::getenv("WLMP_LOG")) {
      level = spdlog::level::from_str(env);
    }
    log->set_level(level);
    return log;
  }();
  return instance;
}

}  // namespace wlmp
