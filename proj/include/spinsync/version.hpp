// version.hpp — tool identity reported in manifests and --version
#pragma once

namespace spinsync {

inline constexpr const char* kToolName = "spinsync";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace spinsync
