#ifndef WAVE3D_SHA256_HPP
#define WAVE3D_SHA256_HPP

#include <string>

namespace wave3d {

// Hex digest of the SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace wave3d

#endif
