#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace mixhal {

inline constexpr std::uint64_t kFnvOffsetBasis = 1469598103934665603ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = kFnvOffsetBasis) {
    std::uint64_t hash = seed;
    for (unsigned char byte : data) {
        hash ^= byte;
        hash *= kFnvPrime;
    }
    return hash;
}

// Chains another field into an existing hash with a separator so that
// ("ab","c") and ("a","bc") map to different keys.
inline std::uint64_t fnv1a64_field(std::uint64_t seed, std::string_view field) {
    seed = fnv1a64("\x1f", seed);
    return fnv1a64(field, seed);
}

inline std::string to_hex(std::uint64_t value) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
    return std::string(buffer);
}

}  // namespace mixhal
