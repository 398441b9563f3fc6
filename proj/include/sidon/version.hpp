#pragma once

namespace sidon {
inline constexpr const char* version = "0.1.0";
}
