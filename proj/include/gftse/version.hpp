#pragma once

namespace gftse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gftse
