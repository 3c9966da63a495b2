#include "swellkit/swelling.hpp"

#include "swellkit/errors.hpp"
#include "swellkit/image_io.hpp"
#include "swellkit/manifest.hpp"
#include "swellkit/parallel.hpp"
#include "swellkit/random.hpp"
#include "swellkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

namespace swellkit {

namespace fs = std::filesystem;

void SwellConfig::validate() const {
    crop.validate();
    if (!(ratio > 0.0 && ratio <= 1.0)) {
        throw InvalidArgument("ratio must lie in (0, 1]");
    }
    if (min_area < 1) {
        throw InvalidArgument("min_area must be at least 1");
    }
    if (max_samples_per_image < 1) {
        throw InvalidArgument("max_samples_per_image must be at least 1");
    }
}

std::vector<std::string> subsample(const std::vector<std::string>& image_ids, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio <= 1.0)) {
        throw InvalidArgument("ratio must lie in (0, 1]");
    }
    if (ratio == 1.0) {
        return image_ids;
    }
    const std::size_t n = image_ids.size();
    const auto take = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[uniform_below(rng, i)]);
    }
    order.resize(take);
    std::sort(order.begin(), order.end());

    std::vector<std::string> picked;
    picked.reserve(take);
    for (auto i : order) {
        picked.push_back(image_ids[i]);
    }
    return picked;
}

BoxSelection select_boxes(const MaskSet& masks, const SwellConfig& cfg) {
    BoxSelection sel;
    std::vector<const MaskEntry*> kept;
    for (const auto& e : masks.entries) {
        if (e.area < cfg.min_area) {
            ++sel.rejected_small;
        } else {
            kept.push_back(&e);
        }
    }
    std::stable_sort(kept.begin(), kept.end(), [](const MaskEntry* a, const MaskEntry* b) { return a->area > b->area; });
    if (kept.size() > cfg.max_samples_per_image) {
        sel.truncated = kept.size() - cfg.max_samples_per_image;
        kept.resize(cfg.max_samples_per_image);
    }
    for (const auto* e : kept) {
        sel.boxes.push_back(e->bbox);
        sel.areas.push_back(e->area);
    }
    return sel;
}

std::vector<TrainingSample> swell_image(const NightImage& image, const MaskSet& masks, const SwellConfig& cfg) {
    cfg.validate();
    if (masks.width != image.width() || masks.height != image.height()) {
        throw InvalidArgument("mask set '" + masks.image_id + "' is " + std::to_string(masks.width) + "x" +
                              std::to_string(masks.height) + " but image is " + std::to_string(image.width()) +
                              "x" + std::to_string(image.height()));
    }
    const auto sel = select_boxes(masks, cfg);
    const auto fill = channel_mean(image);
    std::vector<TrainingSample> samples;
    samples.reserve(sel.boxes.size());
    for (const auto& box : sel.boxes) {
        samples.push_back(make_sample(image, fill, box, cfg.crop, masks.image_id));
    }
    return samples;
}

namespace {

void check_store_id(const std::string& id, std::size_t line) {
    if (id.empty() || id == "." || id == ".." || id.find_first_of("/\\") != std::string::npos) {
        throw ValidationError(line, "image_id '" + id + "' cannot be used as a directory name");
    }
}

struct ImageOutcome {
    std::vector<std::string> index_lines;
    std::uint64_t rejected_small = 0;
    std::uint64_t truncated = 0;
    std::optional<std::string> error;
};

ImageOutcome process_record(const ManifestRecord& record, const fs::path& images_root, const SwellConfig& cfg,
                            const fs::path& out_dir) {
    ImageOutcome outcome;
    const auto& id = record.masks.image_id;
    try {
        const NightImage image = read_png(images_root / record.image);
        const auto sel = select_boxes(record.masks, cfg);
        outcome.rejected_small = sel.rejected_small;
        outcome.truncated = sel.truncated;
        const auto samples = swell_image(image, record.masks, cfg);

        const fs::path dir = out_dir / id;
        fs::remove_all(dir);
        if (!samples.empty()) {
            fs::create_directories(dir);
        }
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const auto& s = samples[k];
            write_png(dir / (std::to_string(k) + ".template.png"), s.template_patch.size, s.template_patch.size,
                      s.template_patch.pixels);
            write_png(dir / (std::to_string(k) + ".search.png"), s.search_patch.size, s.search_patch.size,
                      s.search_patch.pixels);
            nlohmann::ordered_json line;
            line["image_id"] = id;
            line["k"] = k;
            line["bbox"] = bbox_to_json(s.box);
            line["ai"] = ambient_intensity(s.search_patch);
            outcome.index_lines.push_back(line.dump());
        }
    } catch (const Error& e) {
        outcome = ImageOutcome{};
        outcome.error = e.what();
    } catch (const fs::filesystem_error& e) {
        outcome = ImageOutcome{};
        outcome.error = e.what();
    }
    return outcome;
}

} // namespace

SwellReport swell_dataset(const fs::path& manifest, const fs::path& images_root, const SwellConfig& cfg,
                          const fs::path& out_dir, unsigned jobs) {
    cfg.validate();

    std::vector<std::string> ids;
    {
        std::unordered_set<std::string> seen;
        ManifestReader reader(manifest);
        while (auto record = reader.next()) {
            const auto& id = record->masks.image_id;
            check_store_id(id, reader.line());
            if (!seen.insert(id).second) {
                throw ValidationError(reader.line(), "duplicate image_id '" + id + "'");
            }
            ids.push_back(id);
        }
    }
    const auto picked = subsample(ids, cfg.ratio, cfg.seed);
    const std::unordered_set<std::string> selected(picked.begin(), picked.end());

    SwellReport report;
    report.images_in = ids.size();

    fs::create_directories(out_dir);
    std::ofstream index(out_dir / "index.jsonl", std::ios::trunc);
    if (!index) {
        throw IoError("cannot write " + (out_dir / "index.jsonl").string());
    }

    const unsigned workers = resolve_jobs(jobs);
    const std::size_t chunk_size = std::max<std::size_t>(16, 4 * static_cast<std::size_t>(workers));
    ManifestReader reader(manifest);
    bool done = false;
    while (!done) {
        std::vector<ManifestRecord> chunk;
        while (chunk.size() < chunk_size) {
            auto record = reader.next();
            if (!record) {
                done = true;
                break;
            }
            if (selected.contains(record->masks.image_id)) {
                chunk.push_back(std::move(*record));
            }
        }
        std::vector<ImageOutcome> outcomes(chunk.size());
        parallel_for(chunk.size(), workers,
                     [&](std::size_t i) { outcomes[i] = process_record(chunk[i], images_root, cfg, out_dir); });

        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const auto& id = chunk[i].masks.image_id;
            auto& o = outcomes[i];
            if (o.error) {
                ++report.images_failed;
                report.errors.push_back({id, *o.error});
                continue;
            }
            ++report.images_used;
            report.samples_out += o.index_lines.size();
            report.rejected_small += o.rejected_small;
            report.truncated += o.truncated;
            if (o.index_lines.empty()) {
                report.zero_sample_images.push_back(id);
            }
            for (const auto& line : o.index_lines) {
                index << line << '\n';
            }
        }
    }
    index.flush();
    if (!index) {
        throw IoError("failed writing sample index");
    }
    report.swelling_ratio =
        report.images_used == 0 ? 0.0 : static_cast<double>(report.samples_out) / static_cast<double>(report.images_used);
    return report;
}

nlohmann::ordered_json report_to_json(const SwellReport& report) {
    nlohmann::ordered_json doc;
    doc["images_in"] = report.images_in;
    doc["images_used"] = report.images_used;
    doc["images_failed"] = report.images_failed;
    doc["samples_out"] = report.samples_out;
    doc["swelling_ratio"] = report.swelling_ratio;
    doc["rejected_small"] = report.rejected_small;
    doc["truncated"] = report.truncated;
    doc["zero_sample_images"] = report.zero_sample_images;
    auto errors = nlohmann::ordered_json::array();
    for (const auto& e : report.errors) {
        errors.push_back({{"image_id", e.image_id}, {"message", e.message}});
    }
    doc["errors"] = std::move(errors);
    return doc;
}

} // namespace swellkit
