#pragma once

namespace sumprod {
inline constexpr const char* kEngineVersion = "sumprod/0.1.0";
}
