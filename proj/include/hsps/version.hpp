#pragma once

namespace hsps {
inline constexpr const char* kEngineVersion = "0.1.0";
}
