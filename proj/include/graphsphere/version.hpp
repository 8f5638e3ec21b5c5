#pragma once

namespace graphsphere {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace graphsphere
