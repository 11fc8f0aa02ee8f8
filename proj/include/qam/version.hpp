#pragma once

namespace qam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qam
