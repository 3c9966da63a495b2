#include "swellkit/image_io.hpp"

#include "swellkit/errors.hpp"

#include <png.h>

#include <fstream>
#include <iterator>
#include <string>

namespace swellkit {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Owns a png_image so every exit path releases libpng's state.
struct PngImage {
    png_image image{};

    PngImage() { image.version = PNG_IMAGE_VERSION; }
    ~PngImage() { png_image_free(&image); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;

    [[noreturn]] void fail(const char* op) const {
        throw IoError(std::string(op) + ": " + image.message);
    }
};

} // namespace

NightImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw IoError("not a PNG stream");
    }
    PngImage png;
    if (!png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size())) {
        png.fail("png read");
    }
    png.image.format = PNG_FORMAT_RGB;
    const auto width = png.image.width;
    const auto height = png.image.height;
    std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, pixels.data(), 0, nullptr)) {
        png.fail("png decode");
    }
    return NightImage(width, height, std::move(pixels));
}

NightImage read_png(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    try {
        return decode_png(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_png(std::uint32_t width, std::uint32_t height,
                                     std::span<const std::uint8_t> rgb) {
    if (width == 0 || height == 0 || rgb.size() != static_cast<std::size_t>(width) * height * 3) {
        throw InvalidArgument("encode_png: buffer does not match dimensions");
    }
    PngImage png;
    png.image.width = width;
    png.image.height = height;
    png.image.format = PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, rgb.data(), 0, nullptr)) {
        png.fail("png size");
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, rgb.data(), 0, nullptr)) {
        png.fail("png encode");
    }
    out.resize(size);
    return out;
}

std::vector<std::uint8_t> encode_png(const NightImage& image) {
    return encode_png(image.width(), image.height(), image.pixels());
}

void write_png(const std::filesystem::path& path, std::uint32_t width, std::uint32_t height,
               std::span<const std::uint8_t> rgb) {
    auto bytes = encode_png(width, height, rgb);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write to " + path.string());
    }
}

void write_png(const std::filesystem::path& path, const NightImage& image) {
    write_png(path, image.width(), image.height(), image.pixels());
}

} // namespace swellkit
