#pragma once

namespace sqsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sqsim
