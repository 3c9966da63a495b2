#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace swellkit {

/// Axis-aligned box, top-left origin, in pixels.
struct BBox {
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;

    double center_x() const { return x + w / 2.0; }
    double center_y() const { return y + h / 2.0; }
    double area() const { return w * h; }

    /// Finite coordinates and non-negative extent.
    bool is_valid() const;

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Row-major grid of booleans.
class BinaryMask {
  public:
    BinaryMask() = default;
    BinaryMask(std::uint32_t width, std::uint32_t height);

    std::uint32_t width() const { return width_; }
    std::uint32_t height() const { return height_; }

    bool at(std::uint32_t row, std::uint32_t col) const { return bits_[index(row, col)] != 0; }
    void set(std::uint32_t row, std::uint32_t col, bool value = true) {
        bits_[index(row, col)] = value ? 1 : 0;
    }

    std::span<const std::uint8_t> row(std::uint32_t r) const {
        return {bits_.data() + static_cast<std::size_t>(r) * width_, width_};
    }

    /// Number of set bits.
    std::uint64_t area() const;

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

  private:
    std::size_t index(std::uint32_t row, std::uint32_t col) const {
        return static_cast<std::size_t>(row) * width_ + col;
    }

    std::uint32_t width_ = 0;
    std::uint32_t height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Uncompressed COCO-style run lengths: column-major scan, first run is background.
struct RleMask {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<std::uint32_t> counts;

    friend bool operator==(const RleMask&, const RleMask&) = default;
};

/// Interleaved 8-bit RGB image, row-major.
class NightImage {
  public:
    NightImage() = default;
    /// Black image.
    NightImage(std::uint32_t width, std::uint32_t height);
    /// Takes ownership of an H*W*3 buffer; throws InvalidArgument on size mismatch.
    NightImage(std::uint32_t width, std::uint32_t height, std::vector<std::uint8_t> pixels);

    std::uint32_t width() const { return width_; }
    std::uint32_t height() const { return height_; }
    std::span<const std::uint8_t> pixels() const { return pixels_; }

    std::uint8_t at(std::uint32_t x, std::uint32_t y, int channel) const {
        return pixels_[offset(x, y) + static_cast<std::size_t>(channel)];
    }
    void set(std::uint32_t x, std::uint32_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto o = offset(x, y);
        pixels_[o] = r;
        pixels_[o + 1] = g;
        pixels_[o + 2] = b;
    }

    friend bool operator==(const NightImage&, const NightImage&) = default;

  private:
    std::size_t offset(std::uint32_t x, std::uint32_t y) const {
        return (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    std::uint32_t width_ = 0;
    std::uint32_t height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

/// Intersection over union; 0 when the union has zero area.
double iou(const BBox& a, const BBox& b);

/// Center location error: distance between box centers.
double cle(const BBox& a, const BBox& b);

/// Tight box over the set bits, or nullopt for an empty mask.
std::optional<BBox> mask_to_bbox(const BinaryMask& mask);

RleMask rle_encode(const BinaryMask& mask);

/// Throws FormatError unless the runs tile the grid and satisfy the run invariants.
BinaryMask rle_decode(const RleMask& rle);

/// Checks the RleMask invariants without decoding; throws FormatError.
void validate_rle(const RleMask& rle);

/// Foreground pixel count of an already validated RLE.
std::uint64_t rle_area(const RleMask& rle);

/// Rec.601 luma scaled by 1000, computed exactly in integers.
inline std::uint32_t luma_milli(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return 299u * r + 587u * g + 114u * b;
}

} // namespace swellkit
