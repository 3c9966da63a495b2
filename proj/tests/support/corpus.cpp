#include "corpus.hpp"

#include "swellkit/image_io.hpp"
#include "swellkit/manifest.hpp"
#include "swellkit/random.hpp"
#include "swellkit/synthetic_segmenter.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace swellkit::testing {

namespace {

constexpr std::uint32_t kSides[3] = {10, 14, 18};
constexpr std::uint32_t kSlot = kCorpusWidth / 3;

std::uint32_t mix(std::size_t index, std::uint32_t salt, std::uint32_t range) {
    std::uint64_t v = (index + 1) * 0x9E3779B97F4A7C15ull ^ (salt + 1) * 0xC2B2AE3D27D4EB4Full;
    v ^= v >> 29;
    return static_cast<std::uint32_t>(v % range);
}

} // namespace

std::vector<BBox> corpus_boxes(std::size_t index) {
    std::vector<BBox> boxes;
    for (std::uint32_t k = 0; k < 3; ++k) {
        const std::uint32_t side = kSides[k];
        const std::uint32_t x = k * kSlot + 2 + mix(index, 2 * k, kSlot - 4 - side);
        const std::uint32_t y = 2 + mix(index, 2 * k + 1, kCorpusHeight - 4 - side);
        boxes.push_back({double(x), double(y), double(side), double(side)});
    }
    return boxes;
}

NightImage corpus_image(std::size_t index) {
    NightImage image(kCorpusWidth, kCorpusHeight);
    for (std::uint32_t y = 0; y < kCorpusHeight; ++y) {
        for (std::uint32_t x = 0; x < kCorpusWidth; ++x) {
            const auto v = static_cast<std::uint8_t>(4 + (x + y) % 5);
            image.set(x, y, v, v, static_cast<std::uint8_t>(v + 2));
        }
    }
    const auto boxes = corpus_boxes(index);
    for (std::uint32_t k = 0; k < 3; ++k) {
        const auto level = static_cast<std::uint8_t>(60 + mix(index, 10 + k, 190));
        const auto& b = boxes[k];
        for (auto y = static_cast<std::uint32_t>(b.y); y < b.y + b.h; ++y) {
            for (auto x = static_cast<std::uint32_t>(b.x); x < b.x + b.w; ++x) {
                image.set(x, y, level, static_cast<std::uint8_t>(level - 10), static_cast<std::uint8_t>(level / 2));
            }
        }
    }
    return image;
}

std::vector<std::string> write_corpus(const std::filesystem::path& dir, std::size_t count) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i) {
        names.push_back(fmt::format("img_{:03d}.png", i));
        write_png(dir / names.back(), corpus_image(i));
    }
    return names;
}

void write_corpus_manifest(const std::filesystem::path& images_dir, const std::filesystem::path& manifest,
                           std::size_t count) {
    std::ofstream out(manifest, std::ios::trunc);
    for (std::size_t i = 0; i < count; ++i) {
        const auto name = fmt::format("img_{:03d}.png", i);
        const auto image = read_png(images_dir / name);
        auto masks = synthetic_segment(image, kCorpusLumaThreshold, kCorpusMinArea, fmt::format("img_{:03d}", i));
        out << to_manifest_line({name, std::move(masks)}) << '\n';
    }
    if (!out) {
        throw std::runtime_error("cannot write " + manifest.string());
    }
}

NightImage recorded_fixture_image() {
    NightImage image(12, 8);
    const auto fill = [&](std::uint32_t x0, std::uint32_t y0, std::uint32_t w, std::uint32_t h) {
        for (auto y = y0; y < y0 + h; ++y) {
            for (auto x = x0; x < x0 + w; ++x) {
                image.set(x, y, 200, 200, 200);
            }
        }
    };
    fill(1, 1, 2, 2);
    fill(4, 4, 3, 3);
    fill(8, 2, 3, 2);
    return image;
}

Track synthetic_gt(std::uint64_t seed, std::size_t frames) {
    Rng rng(seed);
    Track track;
    double x = 100 + 50 * uniform01(rng);
    double y = 80 + 40 * uniform01(rng);
    double w = 20 + 30 * uniform01(rng);
    double h = 15 + 30 * uniform01(rng);
    for (std::size_t f = 0; f < frames; ++f) {
        x += 2 * standard_normal(rng);
        y += 2 * standard_normal(rng);
        w = std::max(4.0, w + 0.3 * standard_normal(rng));
        h = std::max(4.0, h + 0.3 * standard_normal(rng));
        // Occasional full occlusion, never on the first frame.
        if (f > 0 && uniform01(rng) < 0.05) {
            track.emplace_back(std::nullopt);
        } else {
            track.emplace_back(BBox{std::round(x), std::round(y), std::round(w), std::round(h)});
        }
    }
    return track;
}

Track noisy_prediction(const Track& gt, std::uint64_t seed, double noise_px, double drop) {
    Rng rng(seed);
    Track pred;
    BBox last{0, 0, 10, 10};
    for (const auto& g : gt) {
        if (g) {
            last = *g;
        }
        const double dx = noise_px * standard_normal(rng);
        const double dy = noise_px * standard_normal(rng);
        const double dw = 0.3 * noise_px * standard_normal(rng);
        const double dh = 0.3 * noise_px * standard_normal(rng);
        if (uniform01(rng) < drop) {
            pred.emplace_back(std::nullopt);
            continue;
        }
        pred.emplace_back(BBox{std::round(last.x + dx), std::round(last.y + dy), std::max(1.0, std::round(last.w + dw)),
                               std::max(1.0, std::round(last.h + dh))});
    }
    return pred;
}

void write_track_file(const std::filesystem::path& path, const Track& track) {
    std::ofstream out(path, std::ios::trunc);
    for (const auto& b : track) {
        if (b) {
            out << fmt::format("{},{},{},{}\n", b->x, b->y, b->w, b->h);
        } else {
            out << "NaN,NaN,NaN,NaN\n";
        }
    }
}

void write_tracking_corpus(const std::filesystem::path& root, std::size_t sequences, std::size_t frames) {
    namespace fs = std::filesystem;
    fs::create_directories(root / "gt");
    fs::create_directories(root / "pred" / "steady");
    fs::create_directories(root / "pred" / "jittery");
    nlohmann::ordered_json attributes = nlohmann::ordered_json::object();
    for (std::size_t s = 0; s < sequences; ++s) {
        const auto name = fmt::format("seq_{:02d}", s);
        const auto gt = synthetic_gt(1000 + s, frames);
        write_track_file(root / "gt" / (name + ".txt"), gt);
        write_track_file(root / "pred" / "steady" / (name + ".txt"), noisy_prediction(gt, 2000 + s, 2.0, 0.0));
        write_track_file(root / "pred" / "jittery" / (name + ".txt"), noisy_prediction(gt, 3000 + s, 9.0, 0.1));
        attributes[name] = {s % 2 == 0 ? "IV" : "LAI"};
    }
    std::ofstream(root / "attributes.json", std::ios::trunc) << attributes.dump(2) << '\n';
}

} // namespace swellkit::testing
