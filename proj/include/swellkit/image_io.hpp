#pragma once

#include "swellkit/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace swellkit {

/// Decodes any 8/16-bit PNG (gray, palette, alpha) to 8-bit RGB. Throws IoError.
NightImage read_png(const std::filesystem::path& path);
NightImage decode_png(std::span<const std::uint8_t> bytes);

/// Encodes 8-bit RGB. Output bytes depend only on the pixels (no timestamps).
std::vector<std::uint8_t> encode_png(std::uint32_t width, std::uint32_t height,
                                     std::span<const std::uint8_t> rgb);
std::vector<std::uint8_t> encode_png(const NightImage& image);

void write_png(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height,
               std::span<const std::uint8_t> rgb);
void write_png(const std::filesystem::path& path, const NightImage& image);

} // namespace swellkit
