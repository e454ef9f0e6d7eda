#pragma once

namespace degenhj {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace degenhj
