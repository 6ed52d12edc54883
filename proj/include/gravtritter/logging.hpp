#pragma once

#include <memory>

#include <spdlog/logger.h>

namespace gravtritter {

// Shared stderr logger. The level comes from GRAVTRITTER_LOG
// (off|info|debug); unset means warnings only.
std::shared_ptr<spdlog::logger> logger();

}  // namespace gravtritter
