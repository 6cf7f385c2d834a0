#pragma once

namespace canomat {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace canomat
