#ifndef WINDCAST_VERSION_HPP
#define WINDCAST_VERSION_HPP

namespace windcast {

inline constexpr const char* kVersion = "0.1.0";

// Binary model/parameter file format revision. Bump on any layout change;
// loaders reject files written with a different revision.
inline constexpr unsigned kParamsFormatVersion = 1;

} // namespace windcast

#endif
