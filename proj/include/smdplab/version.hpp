#pragma once

namespace smdplab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smdplab
