#ifndef QVR_VERSION_HPP
#define QVR_VERSION_HPP

namespace qvr {
inline constexpr const char* version = "1.0.0";
}

#endif
