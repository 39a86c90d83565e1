// version.hpp

#pragma once

namespace rankins {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rankins
