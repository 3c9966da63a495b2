#include "swellkit/geometry.hpp"

#include "swellkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace swellkit {

namespace {

void require_valid(const BBox& box, const char* name) {
    if (!box.is_valid()) {
        throw InvalidArgument(std::string("invalid box '") + name +
                              "': coordinates must be finite and extents non-negative");
    }
}

} // namespace

bool BBox::is_valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) && w >= 0.0 &&
           h >= 0.0;
}

BinaryMask::BinaryMask(std::uint32_t width, std::uint32_t height)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {}

std::uint64_t BinaryMask::area() const {
    return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

NightImage::NightImage(std::uint32_t width, std::uint32_t height)
    : NightImage(width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3, 0)) {}

NightImage::NightImage(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width == 0 || height == 0) {
        throw InvalidArgument("image dimensions must be at least 1x1");
    }
    if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
        throw InvalidArgument("pixel buffer size does not match " + std::to_string(width) + "x" +
                              std::to_string(height) + "x3");
    }
}

double iou(const BBox& a, const BBox& b) {
    require_valid(a, "a");
    require_valid(b, "b");

    // Areas come from the same corner differences as the intersection so that
    // identical boxes give exactly 1.
    const double ax2 = a.x + a.w, ay2 = a.y + a.h;
    const double bx2 = b.x + b.w, by2 = b.y + b.h;
    const double area_a = (ax2 - a.x) * (ay2 - a.y);
    const double area_b = (bx2 - b.x) * (by2 - b.y);

    const double iw = std::max(0.0, std::min(ax2, bx2) - std::max(a.x, b.x));
    const double ih = std::max(0.0, std::min(ay2, by2) - std::max(a.y, b.y));
    const double inter = iw * ih;
    const double uni = area_a + area_b - inter;
    if (!(uni > 0.0)) {
        return 0.0;
    }
    return std::clamp(inter / uni, 0.0, 1.0);
}

double cle(const BBox& a, const BBox& b) {
    require_valid(a, "a");
    require_valid(b, "b");
    return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

std::optional<BBox> mask_to_bbox(const BinaryMask& mask) {
    std::uint32_t min_row = mask.height(), max_row = 0;
    std::uint32_t min_col = mask.width(), max_col = 0;
    bool any = false;
    for (std::uint32_t r = 0; r < mask.height(); ++r) {
        auto row = mask.row(r);
        for (std::uint32_t c = 0; c < mask.width(); ++c) {
            if (row[c] == 0) {
                continue;
            }
            any = true;
            min_row = std::min(min_row, r);
            max_row = std::max(max_row, r);
            min_col = std::min(min_col, c);
            max_col = std::max(max_col, c);
        }
    }
    if (!any) {
        return std::nullopt;
    }
    return BBox{static_cast<double>(min_col), static_cast<double>(min_row),
                static_cast<double>(max_col - min_col + 1), static_cast<double>(max_row - min_row + 1)};
}

RleMask rle_encode(const BinaryMask& mask) {
    RleMask rle{mask.width(), mask.height(), {}};
    const std::uint64_t total = static_cast<std::uint64_t>(mask.width()) * mask.height();
    if (total == 0) {
        return rle;
    }
    bool current = false;
    std::uint32_t run = 0;
    for (std::uint32_t c = 0; c < mask.width(); ++c) {
        for (std::uint32_t r = 0; r < mask.height(); ++r) {
            if (mask.at(r, c) != current) {
                rle.counts.push_back(run);
                run = 0;
                current = !current;
            }
            ++run;
        }
    }
    rle.counts.push_back(run);
    return rle;
}

void validate_rle(const RleMask& rle) {
    const std::uint64_t total = static_cast<std::uint64_t>(rle.width) * rle.height;
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < rle.counts.size(); ++i) {
        if (i > 0 && rle.counts[i] == 0) {
            throw FormatError("zero-length run at position " + std::to_string(i));
        }
        sum += rle.counts[i];
    }
    if (sum != total) {
        throw FormatError("run lengths sum to " + std::to_string(sum) + " but mask has " +
                          std::to_string(total) + " pixels");
    }
}

BinaryMask rle_decode(const RleMask& rle) {
    validate_rle(rle);
    BinaryMask mask(rle.width, rle.height);
    std::uint64_t pos = 0;
    bool value = false;
    for (auto run : rle.counts) {
        if (value) {
            for (std::uint64_t i = pos; i < pos + run; ++i) {
                mask.set(static_cast<std::uint32_t>(i % rle.height), static_cast<std::uint32_t>(i / rle.height));
            }
        }
        pos += run;
        value = !value;
    }
    return mask;
}

std::uint64_t rle_area(const RleMask& rle) {
    std::uint64_t area = 0;
    for (std::size_t i = 1; i < rle.counts.size(); i += 2) {
        area += rle.counts[i];
    }
    return area;
}

} // namespace swellkit
