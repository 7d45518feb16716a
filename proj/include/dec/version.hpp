#pragma once

namespace dec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace dec
