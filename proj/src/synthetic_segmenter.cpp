#include "swellkit/synthetic_segmenter.hpp"

#include <vector>

namespace swellkit {

MaskSet synthetic_segment(const NightImage& image, std::uint8_t luma_threshold, std::uint64_t min_area,
                          const std::string& image_id) {
    const std::uint32_t w = image.width();
    const std::uint32_t h = image.height();
    const std::uint32_t cut = 1000u * luma_threshold;

    std::vector<std::uint8_t> fg(static_cast<std::size_t>(w) * h, 0);
    for (std::uint32_t y = 0; y < h; ++y) {
        for (std::uint32_t x = 0; x < w; ++x) {
            fg[static_cast<std::size_t>(y) * w + x] = luma_milli(image.at(x, y, 0), image.at(x, y, 1), image.at(x, y, 2)) > cut;
        }
    }

    MaskSet set{image_id, w, h, {}};
    std::vector<std::uint8_t> seen(fg.size(), 0);
    std::vector<std::size_t> stack;
    std::vector<std::size_t> component;

    // Raster scan: components are discovered in order of their first pixel.
    for (std::size_t start = 0; start < fg.size(); ++start) {
        if (!fg[start] || seen[start]) {
            continue;
        }
        component.clear();
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            component.push_back(p);
            const std::size_t x = p % w;
            const std::size_t y = p / w;
            auto visit = [&](std::size_t q) {
                if (fg[q] && !seen[q]) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
            };
            if (x > 0) visit(p - 1);
            if (x + 1 < w) visit(p + 1);
            if (y > 0) visit(p - w);
            if (y + 1 < h) visit(p + w);
        }
        if (component.size() < min_area) {
            continue;
        }
        BinaryMask mask(w, h);
        for (std::size_t p : component) {
            mask.set(static_cast<std::uint32_t>(p / w), static_cast<std::uint32_t>(p % w));
        }
        set.entries.push_back(make_entry(mask, 1.0));
    }
    return set;
}

} // namespace swellkit
