#pragma once

namespace filmspec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace filmspec
