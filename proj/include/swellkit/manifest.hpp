#pragma once

#include "swellkit/mask_set.hpp"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace swellkit {

/// One manifest line: an image path (relative to an images root) and its masks.
struct ManifestRecord {
    std::string image;
    MaskSet masks;

    friend bool operator==(const ManifestRecord&, const ManifestRecord&) = default;
};

/// Streams a JSON-Lines manifest one record at a time. Blank lines are skipped.
///
/// Each line looks like
///   {"image": "a.png", "image_id": "a", "width": 640, "height": 480,
///    "masks": [{"counts": [...], "bbox": [x, y, w, h], "area": n, "score": s}]}
///
/// Malformed JSON or a wrong shape raises ParseError; a well-formed record that
/// breaks a MaskSet invariant raises ValidationError. Both carry the 1-based line.
class ManifestReader {
  public:
    explicit ManifestReader(const std::filesystem::path& path);

    /// Next record, or nullopt at end of file.
    std::optional<ManifestRecord> next();

    /// Line number of the record most recently returned.
    std::size_t line() const { return line_; }

  private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t line_ = 0;
};

/// Parses and validates a single manifest line.
ManifestRecord parse_manifest_line(const std::string& text, std::size_t line);

/// Canonical single-line serialisation (no trailing newline).
std::string to_manifest_line(const ManifestRecord& record);

} // namespace swellkit
