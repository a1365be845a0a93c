#ifndef DSM_VERSION_HPP
#define DSM_VERSION_HPP

namespace dsm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dsm

#endif  // DSM_VERSION_HPP
