#pragma once

namespace dns2d {

inline constexpr const char* kToolVersion = "dns2d 0.1.0";

}  // namespace dns2d
