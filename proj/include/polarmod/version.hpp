#pragma once

namespace polarmod {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polarmod
