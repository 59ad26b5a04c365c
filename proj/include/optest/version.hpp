#pragma once

namespace optest {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace optest
