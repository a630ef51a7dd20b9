#include "cablesim/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace cablesim {

void init_logging() {
  auto logger = spdlog::get("cablesim");
  if (!logger) logger = spdlog::stderr_color_mt("cablesim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("CABLESIM_LOG_LEVEL")) {
    const std::string name(env);
    const auto level = spdlog::level::from_str(name);
    // from_str maps unknown names to off.
    if (level == spdlog::level::off && name != "off") {
      spdlog::warn("unknown CABLESIM_LOG_LEVEL '{}', keeping warn", name);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace cablesim
