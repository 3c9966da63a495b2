#include "swellkit/crop.hpp"

#include "swellkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace swellkit {

void CropConfig::validate() const {
    if (template_size < 16) {
        throw InvalidArgument("template size must be at least 16");
    }
    if (search_size <= template_size) {
        throw InvalidArgument("search size must exceed template size");
    }
    if (!(context_amount >= 0.0 && context_amount <= 1.0)) {
        throw InvalidArgument("context amount must lie in [0, 1]");
    }
}

const char* to_string(PatchKind kind) {
    return kind == PatchKind::Template ? "template" : "search";
}

ChannelMean channel_mean(const NightImage& image) {
    std::array<std::uint64_t, 3> sum{};
    auto px = image.pixels();
    for (std::size_t i = 0; i < px.size(); i += 3) {
        sum[0] += px[i];
        sum[1] += px[i + 1];
        sum[2] += px[i + 2];
    }
    const std::uint64_t n = static_cast<std::uint64_t>(image.width()) * image.height();
    ChannelMean mean{};
    for (int c = 0; c < 3; ++c) {
        mean[c] = static_cast<std::uint8_t>((sum[c] + n / 2) / n);
    }
    return mean;
}

CropWindow crop_window(const BBox& box, const CropConfig& cfg, PatchKind kind) {
    if (!box.is_valid() || !(box.w > 0.0) || !(box.h > 0.0)) {
        throw InvalidArgument("crop needs a finite box with positive width and height");
    }
    const double pad = cfg.context_amount * (box.w + box.h);
    double side = std::sqrt((box.w + pad) * (box.h + pad));
    if (kind == PatchKind::Search) {
        side = side * (static_cast<double>(cfg.search_size) / static_cast<double>(cfg.template_size));
    }
    return {box.center_x(), box.center_y(), side};
}

Patch crop_patch(const NightImage& image, const ChannelMean& fill, const BBox& box, const CropConfig& cfg,
                 PatchKind kind) {
    cfg.validate();
    const CropWindow win = crop_window(box, cfg, kind);
    const std::uint32_t size = kind == PatchKind::Template ? cfg.template_size : cfg.search_size;

    Patch patch;
    patch.size = size;
    patch.kind = kind;
    patch.source_box = box;
    patch.pixels.resize(static_cast<std::size_t>(size) * size * 3);

    const double step = win.side / size;
    const double origin_x = win.center_x - win.side / 2.0;
    const double origin_y = win.center_y - win.side / 2.0;
    const double width = image.width();
    const double height = image.height();
    const auto max_x = static_cast<std::int64_t>(image.width()) - 1;
    const auto max_y = static_cast<std::int64_t>(image.height()) - 1;

    auto* out = patch.pixels.data();
    for (std::uint32_t j = 0; j < size; ++j) {
        // Output pixel centres sample the continuous image plane, where pixel
        // i covers [i, i+1).
        const double v = origin_y + (j + 0.5) * step;
        for (std::uint32_t i = 0; i < size; ++i, out += 3) {
            const double u = origin_x + (i + 0.5) * step;
            if (!(u >= 0.0 && u < width && v >= 0.0 && v < height)) {
                out[0] = fill[0];
                out[1] = fill[1];
                out[2] = fill[2];
                ++patch.padded_pixels;
                continue;
            }
            const double fx = u - 0.5;
            const double fy = v - 0.5;
            const double x0f = std::floor(fx);
            const double y0f = std::floor(fy);
            const double tx = fx - x0f;
            const double ty = fy - y0f;
            const auto x0 = std::clamp<std::int64_t>(static_cast<std::int64_t>(x0f), 0, max_x);
            const auto x1 = std::clamp<std::int64_t>(static_cast<std::int64_t>(x0f) + 1, 0, max_x);
            const auto y0 = std::clamp<std::int64_t>(static_cast<std::int64_t>(y0f), 0, max_y);
            const auto y1 = std::clamp<std::int64_t>(static_cast<std::int64_t>(y0f) + 1, 0, max_y);
            for (int c = 0; c < 3; ++c) {
                const double p00 = image.at(static_cast<std::uint32_t>(x0), static_cast<std::uint32_t>(y0), c);
                const double p10 = image.at(static_cast<std::uint32_t>(x1), static_cast<std::uint32_t>(y0), c);
                const double p01 = image.at(static_cast<std::uint32_t>(x0), static_cast<std::uint32_t>(y1), c);
                const double p11 = image.at(static_cast<std::uint32_t>(x1), static_cast<std::uint32_t>(y1), c);
                const double top = p00 + (p10 - p00) * tx;
                const double bottom = p01 + (p11 - p01) * tx;
                const double value = top + (bottom - top) * ty;
                out[c] = static_cast<std::uint8_t>(std::lround(std::clamp(value, 0.0, 255.0)));
            }
        }
    }
    return patch;
}

Patch crop_patch(const NightImage& image, const BBox& box, const CropConfig& cfg, PatchKind kind) {
    return crop_patch(image, channel_mean(image), box, cfg, kind);
}

TrainingSample make_sample(const NightImage& image, const ChannelMean& fill, const BBox& box,
                           const CropConfig& cfg, const std::string& image_id) {
    return TrainingSample{crop_patch(image, fill, box, cfg, PatchKind::Template),
                          crop_patch(image, fill, box, cfg, PatchKind::Search), box, image_id};
}

TrainingSample make_sample(const NightImage& image, const BBox& box, const CropConfig& cfg,
                           const std::string& image_id) {
    return make_sample(image, channel_mean(image), box, cfg, image_id);
}

} // namespace swellkit
