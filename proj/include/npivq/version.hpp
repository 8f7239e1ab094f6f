#pragma once

namespace npivq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace npivq
