#pragma once

namespace almg {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace almg
