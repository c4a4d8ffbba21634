#pragma once

#include <string>

namespace fgi {

// hex digest of the SHA-256 of `data`
std::string sha256_hex(const std::string& data);

}  // namespace fgi
