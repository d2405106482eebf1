#ifndef CATLAB_VERSION_HPP
#define CATLAB_VERSION_HPP

namespace catlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace catlab

#endif  // CATLAB_VERSION_HPP
