#pragma once

namespace gravtritter {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gravtritter
