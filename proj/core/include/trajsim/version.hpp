#pragma once

namespace trajsim {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace trajsim
