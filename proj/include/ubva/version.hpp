#pragma once

namespace ubva {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ubva
