#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace forgery {

/// Lowercase-hex SHA-256 of a byte buffer.
std::string sha256_hex(const std::uint8_t* bytes, std::size_t size);
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);
std::string sha256_hex(const std::string& text);

} // namespace forgery
