#include "swellkit/manifest.hpp"

#include "swellkit/errors.hpp"

namespace swellkit {

ManifestReader::ManifestReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) {
        throw IoError("cannot open manifest " + path.string());
    }
}

std::optional<ManifestRecord> ManifestReader::next() {
    std::string text;
    while (std::getline(in_, text)) {
        ++line_;
        if (text.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        return parse_manifest_line(text, line_);
    }
    if (in_.bad()) {
        throw IoError("read failure in " + path_.string());
    }
    return std::nullopt;
}

ManifestRecord parse_manifest_line(const std::string& text, std::size_t line) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line, e.what());
    }

    ManifestRecord record;
    try {
        if (!doc.is_object()) {
            throw SchemaError("record must be a JSON object");
        }
        auto it = doc.find("image");
        if (it == doc.end() || !it->is_string()) {
            throw SchemaError("'image' must be a string");
        }
        record.image = it->get<std::string>();
        record.masks = mask_set_from_json(doc);
    } catch (const SchemaError& e) {
        throw ParseError(line, e.what());
    }

    if (record.image.empty()) {
        throw ValidationError(line, "empty image path");
    }
    try {
        validate_mask_set(record.masks);
    } catch (const ValidationError& e) {
        throw ValidationError(line, e.what());
    }
    return record;
}

std::string to_manifest_line(const ManifestRecord& record) {
    nlohmann::ordered_json doc;
    doc["image"] = record.image;
    const auto masks = mask_set_to_json(record.masks);
    for (const auto& [key, value] : masks.items()) {
        doc[key] = value;
    }
    return doc.dump();
}

} // namespace swellkit
