#ifndef SUBORD_VERSION_HPP
#define SUBORD_VERSION_HPP

#define SUBORD_VERSION_STRING "0.3.0"

namespace subord {
inline constexpr const char* version = SUBORD_VERSION_STRING;
}

#endif  // SUBORD_VERSION_HPP
