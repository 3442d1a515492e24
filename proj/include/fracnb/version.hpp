#ifndef FRACNB_VERSION_HPP
#define FRACNB_VERSION_HPP

#include <cstdint>

namespace fracnb {

inline constexpr const char* version = "0.1.0";
inline constexpr std::uint64_t default_seed = 20240611;

}  // namespace fracnb

#endif
