#pragma once

#define FDHOM_VERSION_STRING "0.1.0"

namespace fdhom {

inline constexpr const char* version() { return FDHOM_VERSION_STRING; }

}  // namespace fdhom
