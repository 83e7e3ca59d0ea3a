#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace evdemand {

// FNV-1a 64-bit. Used for artifact manifests and determinism checks, not for
// anything security-sensitive.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes);
std::string fnv1a64_file_hex(const std::string& path);

} // namespace evdemand
