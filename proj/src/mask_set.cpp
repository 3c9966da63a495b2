#include "swellkit/mask_set.hpp"

#include "swellkit/errors.hpp"

#include <cmath>
#include <limits>

namespace swellkit {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(std::string("missing key '") + key + "'");
    }
    return *it;
}

std::uint64_t require_unsigned(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number_unsigned()) {
        throw SchemaError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::uint32_t require_u32(const json& obj, const char* key) {
    auto v = require_unsigned(obj, key);
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw SchemaError(std::string("'") + key + "' out of range");
    }
    return static_cast<std::uint32_t>(v);
}

double require_number(const json& v, const char* what) {
    if (!v.is_number()) {
        throw SchemaError(std::string(what) + " must be a number");
    }
    return v.get<double>();
}

std::string describe(const BBox& b) {
    return "[" + std::to_string(b.x) + "," + std::to_string(b.y) + "," + std::to_string(b.w) + "," +
           std::to_string(b.h) + "]";
}

nlohmann::ordered_json coordinate(double v) {
    if (std::isfinite(v) && v == std::trunc(v) && std::fabs(v) < 9.0e15) {
        return static_cast<std::int64_t>(v);
    }
    return v;
}

} // namespace

MaskEntry make_entry(const BinaryMask& mask, double score) {
    auto box = mask_to_bbox(mask);
    if (!box) {
        throw InvalidArgument("cannot build a mask entry from an empty mask");
    }
    return MaskEntry{rle_encode(mask), *box, mask.area(), score};
}

void validate_mask_set(const MaskSet& set) {
    if (set.width == 0 || set.height == 0) {
        throw ValidationError("mask set '" + set.image_id + "' has zero width or height");
    }
    for (std::size_t i = 0; i < set.entries.size(); ++i) {
        const auto& e = set.entries[i];
        const std::string where = "mask " + std::to_string(i) + " of '" + set.image_id + "': ";
        if (e.mask.width != set.width || e.mask.height != set.height) {
            throw ValidationError(where + "mask dimensions differ from image dimensions");
        }
        BinaryMask decoded;
        try {
            decoded = rle_decode(e.mask);
        } catch (const FormatError& err) {
            throw ValidationError(where + err.what());
        }
        const auto box = mask_to_bbox(decoded);
        if (!box) {
            throw ValidationError(where + "mask is empty");
        }
        if (!(*box == e.bbox)) {
            throw ValidationError(where + "bbox " + describe(e.bbox) + " does not match mask extent " +
                                  describe(*box));
        }
        const auto area = decoded.area();
        if (area != e.area) {
            throw ValidationError(where + "area " + std::to_string(e.area) + " but mask has " +
                                  std::to_string(area) + " set pixels");
        }
        if (!(e.score >= 0.0 && e.score <= 1.0)) {
            throw ValidationError(where + "score outside [0, 1]");
        }
    }
}

MaskSet mask_set_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("mask set must be a JSON object");
    }
    MaskSet set;
    const json& id = require(doc, "image_id");
    if (!id.is_string()) {
        throw SchemaError("'image_id' must be a string");
    }
    set.image_id = id.get<std::string>();
    set.width = require_u32(doc, "width");
    set.height = require_u32(doc, "height");

    const json& masks = require(doc, "masks");
    if (!masks.is_array()) {
        throw SchemaError("'masks' must be an array");
    }
    set.entries.reserve(masks.size());
    for (const json& m : masks) {
        if (!m.is_object()) {
            throw SchemaError("mask entry must be an object");
        }
        MaskEntry entry;
        const json& counts = require(m, "counts");
        if (!counts.is_array()) {
            throw SchemaError("'counts' must be an array");
        }
        entry.mask.width = set.width;
        entry.mask.height = set.height;
        entry.mask.counts.reserve(counts.size());
        for (const json& c : counts) {
            if (!c.is_number_unsigned() || c.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
                throw SchemaError("'counts' entries must be non-negative 32-bit integers");
            }
            entry.mask.counts.push_back(c.get<std::uint32_t>());
        }
        const json& bbox = require(m, "bbox");
        if (!bbox.is_array() || bbox.size() != 4) {
            throw SchemaError("'bbox' must be an array of 4 numbers");
        }
        entry.bbox = BBox{require_number(bbox[0], "bbox[0]"), require_number(bbox[1], "bbox[1]"),
                          require_number(bbox[2], "bbox[2]"), require_number(bbox[3], "bbox[3]")};
        entry.area = require_unsigned(m, "area");
        entry.score = require_number(require(m, "score"), "'score'");
        set.entries.push_back(std::move(entry));
    }
    return set;
}

nlohmann::ordered_json bbox_to_json(const BBox& box) {
    return nlohmann::ordered_json::array({coordinate(box.x), coordinate(box.y), coordinate(box.w), coordinate(box.h)});
}

nlohmann::ordered_json mask_set_to_json(const MaskSet& set) {
    nlohmann::ordered_json doc;
    doc["image_id"] = set.image_id;
    doc["width"] = set.width;
    doc["height"] = set.height;
    auto masks = nlohmann::ordered_json::array();
    for (const auto& e : set.entries) {
        nlohmann::ordered_json m;
        m["counts"] = e.mask.counts;
        m["bbox"] = bbox_to_json(e.bbox);
        m["area"] = e.area;
        m["score"] = e.score;
        masks.push_back(std::move(m));
    }
    doc["masks"] = std::move(masks);
    return doc;
}

} // namespace swellkit
