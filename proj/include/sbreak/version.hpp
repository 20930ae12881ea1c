#pragma once

namespace sbreak {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sbreak
