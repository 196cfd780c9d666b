#pragma once

namespace forgery {

inline constexpr const char* kVersion = "0.1.0";

} // namespace forgery
