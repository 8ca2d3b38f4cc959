#pragma once

namespace cgw {

inline constexpr const char* kArtifactName = "cgwishart";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace cgw
