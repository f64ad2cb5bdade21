#pragma once

namespace cqmine {

inline constexpr const char* kVersion = "0.1.0";

} // namespace cqmine
