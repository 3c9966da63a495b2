#pragma once

#include "swellkit/mask_set.hpp"

#include <cstdint>
#include <string>

namespace swellkit {

/// Deterministic stand-in for a learned mask generator: pixels with
/// Rec.601 luma strictly above luma_threshold, split into 4-connected
/// components, keeping components of at least min_area pixels (score 1).
/// Entries are ordered by each component's first pixel in row-major order.
MaskSet synthetic_segment(const NightImage& image, std::uint8_t luma_threshold, std::uint64_t min_area,
                          const std::string& image_id);

} // namespace swellkit
