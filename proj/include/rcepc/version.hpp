#ifndef RCEPC_VERSION_HPP
#define RCEPC_VERSION_HPP

namespace rcepc {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
