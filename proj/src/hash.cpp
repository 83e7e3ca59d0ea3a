#include "evdemand/hash.hpp"

#include "evdemand/csv.hpp"

#include <cstdio>

namespace evdemand {

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

std::string fnv1a64_file_hex(const std::string& path) {
    return fnv1a64_hex(read_file(path));
}

} // namespace evdemand
