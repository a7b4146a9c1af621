#pragma once

namespace degpath {
inline constexpr const char* kVersion = "0.1.0";
}
