#pragma once

namespace ergmpool {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ergmpool
