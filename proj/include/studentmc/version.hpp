#pragma once

namespace studentmc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace studentmc
