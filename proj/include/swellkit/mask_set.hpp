#pragma once

#include "swellkit/geometry.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace swellkit {

struct MaskEntry {
    RleMask mask;
    BBox bbox;
    std::uint64_t area = 0;
    double score = 1.0;

    friend bool operator==(const MaskEntry&, const MaskEntry&) = default;
};

/// Every segmented object of one image.
struct MaskSet {
    std::string image_id;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<MaskEntry> entries;

    friend bool operator==(const MaskSet&, const MaskSet&) = default;
};

/// Builds an entry whose bbox and area are derived from the mask itself.
/// Throws InvalidArgument for an empty mask.
MaskEntry make_entry(const BinaryMask& mask, double score);

/// Strict check: dimensions agree, RLE is well formed, bbox == mask_to_bbox(decode),
/// area == set bits, score in [0,1]. Throws ValidationError, never repairs.
void validate_mask_set(const MaskSet& set);

/// Reads the {"image_id","width","height","masks":[...]} shape. Extra keys are
/// ignored. Throws SchemaError on missing keys or wrong JSON types; does not
/// check invariants.
MaskSet mask_set_from_json(const nlohmann::json& doc);

/// Canonical key order: image_id, width, height, masks[counts, bbox, area, score].
/// Integral bbox coordinates are written as JSON integers.
nlohmann::ordered_json mask_set_to_json(const MaskSet& set);

nlohmann::ordered_json bbox_to_json(const BBox& box);

} // namespace swellkit
