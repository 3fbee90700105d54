#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace finimg {

inline constexpr std::uint64_t kFnvOffset64 = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime64 = 0x100000001b3ULL;

/// FNV-1a, 64-bit. Used for config and artifact fingerprints.
constexpr std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = kFnvOffset64) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime64;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace finimg
