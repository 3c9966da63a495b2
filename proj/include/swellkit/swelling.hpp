#pragma once

#include "swellkit/crop.hpp"
#include "swellkit/mask_set.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace swellkit {

struct SwellConfig {
    CropConfig crop;
    std::uint64_t min_area = 64;
    std::uint32_t max_samples_per_image = 64;
    /// Fraction of manifest images to swell.
    double ratio = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SwellError {
    std::string image_id;
    std::string message;
};

/// Totals of one swelling run. swelling_ratio = samples_out / images_used
/// (0 when no image was used).
struct SwellReport {
    std::uint64_t images_in = 0;
    std::uint64_t images_used = 0;
    std::uint64_t images_failed = 0;
    std::uint64_t samples_out = 0;
    double swelling_ratio = 0.0;
    std::uint64_t rejected_small = 0;
    std::uint64_t truncated = 0;
    std::vector<std::string> zero_sample_images;
    std::vector<SwellError> errors;
};

/// Seeded Fisher-Yates shuffle, then the first round(ratio*N) picks, returned
/// in their original input order. ratio == 1 returns the input unchanged.
std::vector<std::string> subsample(const std::vector<std::string>& image_ids, double ratio, std::uint64_t seed);

struct BoxSelection {
    /// Surviving boxes, largest mask area first (ties keep provider order).
    std::vector<BBox> boxes;
    std::vector<std::uint64_t> areas;
    std::uint64_t rejected_small = 0;
    std::uint64_t truncated = 0;
};

BoxSelection select_boxes(const MaskSet& masks, const SwellConfig& cfg);

/// One template/search sample per selected box. Throws InvalidArgument if the
/// mask set's dimensions differ from the image.
std::vector<TrainingSample> swell_image(const NightImage& image, const MaskSet& masks, const SwellConfig& cfg);

/// Runs subsample + swell_image over a manifest and writes the sample store:
///
///   out/<image_id>/<k>.template.png
///   out/<image_id>/<k>.search.png
///   out/index.jsonl     {"image_id", "k", "bbox", "ai"} per sample, manifest order
///
/// A manifest error is fatal (ParseError/ValidationError). An unreadable or
/// mismatched image is recorded in the report and skipped. Output does not
/// depend on `jobs` (0 = all cores).
SwellReport swell_dataset(const std::filesystem::path& manifest, const std::filesystem::path& images_root,
                          const SwellConfig& cfg, const std::filesystem::path& out_dir, unsigned jobs = 1);

nlohmann::ordered_json report_to_json(const SwellReport& report);

} // namespace swellkit
