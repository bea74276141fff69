#pragma once

namespace rmst {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rmst
