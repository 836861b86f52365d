// sha256.hpp — content hashing for run manifests
#pragma once

#include <cstdint>
#include <string>

namespace spinsync {

// Hex digest of a byte buffer.
std::string sha256_hex(const void* data, size_t len);
inline std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

}  // namespace spinsync
