#pragma once

namespace memcost {

inline constexpr const char* kVersion = "0.1.0";

} // namespace memcost
