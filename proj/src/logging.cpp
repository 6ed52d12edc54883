#include "gravtritter/logging.hpp"

#include <cstdlib>
#include <string_view>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace gravtritter {
namespace {

spdlog::level::level_enum level_from_env() {
  const char* raw = std::getenv("GRAVTRITTER_LOG");
  if (raw == nullptr) return spdlog::level::warn;
  const std::string_view value(raw);
  if (value == "off") return spdlog::level::off;
  if (value == "info") return spdlog::level::info;
  if (value == "debug") return spdlog::level::debug;
  return spdlog::level::warn;
}

}  // namespace

std::shared_ptr<spdlog::logger> logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto log = std::make_shared<spdlog::logger>(
        "gravtritter", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    log->set_level(level_from_env());
    log->set_pattern("[%l] %v");
    return log;
  }();
  return instance;
}

}  // namespace gravtritter
