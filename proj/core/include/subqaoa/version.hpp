#pragma once

namespace subqaoa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace subqaoa
