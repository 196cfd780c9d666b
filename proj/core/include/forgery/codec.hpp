#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "forgery/image.hpp"

namespace forgery {

/// Decode a PNG byte stream. 16-bit inputs are rejected; alpha is stripped.
ImageBuffer decode_png(const std::uint8_t* bytes, std::size_t size);

/// Encode as PNG (grayscale or RGB, 8-bit). Output bytes are deterministic
/// for a given input.
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);

/// Decode a JPEG byte stream to grayscale or RGB.
ImageBuffer decode_jpeg(const std::uint8_t* bytes, std::size_t size);

std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality = 90);

/// Load by extension (.png, .jpg, .jpeg; case-insensitive).
ImageBuffer load_image(const std::filesystem::path& path);

/// Save by extension; directories must already exist.
void save_image(const std::filesystem::path& path, const ImageBuffer& img);

} // namespace forgery
