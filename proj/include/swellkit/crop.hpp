#pragma once

#include "swellkit/geometry.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace swellkit {

/// Template/search patch geometry. Defaults follow the usual Siamese-tracker setup.
struct CropConfig {
    std::uint32_t template_size = 127;
    std::uint32_t search_size = 255;
    double context_amount = 0.5;

    /// Throws InvalidArgument unless 16 <= template_size < search_size and 0 <= context_amount <= 1.
    void validate() const;
};

enum class PatchKind { Template, Search };

const char* to_string(PatchKind kind);

/// Square RGB patch cut around a box.
struct Patch {
    std::uint32_t size = 0;
    std::vector<std::uint8_t> pixels; // size*size*3, row-major RGB
    BBox source_box;
    PatchKind kind = PatchKind::Template;
    /// Output pixels whose sample point fell outside the image and got the mean colour.
    std::uint64_t padded_pixels = 0;
};

/// A template/search pair around one object of one image.
struct TrainingSample {
    Patch template_patch;
    Patch search_patch;
    BBox box;
    std::string image_id;
};

/// Image-space square that a patch is resampled from.
struct CropWindow {
    double center_x = 0.0;
    double center_y = 0.0;
    double side = 0.0;
};

/// Per-channel image mean, rounded to nearest; used to fill out-of-image area.
using ChannelMean = std::array<std::uint8_t, 3>;

ChannelMean channel_mean(const NightImage& image);

/// With p = context*(w+h) the template side is sqrt((w+p)(h+p)); the search
/// side is that times search_size/template_size. Throws on a degenerate box.
CropWindow crop_window(const BBox& box, const CropConfig& cfg, PatchKind kind);

/// Bilinear resample of crop_window(box) to a square patch. Sample points
/// outside the image take the image's channel mean.
Patch crop_patch(const NightImage& image, const BBox& box, const CropConfig& cfg, PatchKind kind);
Patch crop_patch(const NightImage& image, const ChannelMean& fill, const BBox& box, const CropConfig& cfg,
                 PatchKind kind);

TrainingSample make_sample(const NightImage& image, const BBox& box, const CropConfig& cfg,
                           const std::string& image_id);
TrainingSample make_sample(const NightImage& image, const ChannelMean& fill, const BBox& box,
                           const CropConfig& cfg, const std::string& image_id);

} // namespace swellkit
