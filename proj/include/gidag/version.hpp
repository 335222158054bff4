#pragma once

namespace gidag {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gidag
