#pragma once

#include "swellkit/crop.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace swellkit {

inline constexpr double kLaiThreshold = 20.0;

/// Mean Rec.601 luma of an interleaved RGB buffer, in [0, 255].
double ambient_intensity(std::span<const std::uint8_t> rgb);
double ambient_intensity(const Patch& patch);

/// Low ambient intensity: strictly below the threshold.
inline bool is_lai(double ai, double threshold = kLaiThreshold) {
    return ai < threshold;
}

/// Histogram of ambient intensity. Bin k covers [k*bin_width, (k+1)*bin_width);
/// the last bin also takes AI == 255.
class AiHistogram {
  public:
    explicit AiHistogram(double bin_width = 1.0, double lai_threshold = kLaiThreshold);

    /// Throws ValidationError when ai is not in [0, 255].
    void add(double ai);
    void merge(const AiHistogram& other);

    double bin_width() const { return bin_width_; }
    double lai_threshold() const { return lai_threshold_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total() const { return total_; }
    std::uint64_t lai_count() const { return lai_count_; }
    double lai_fraction() const { return total_ == 0 ? 0.0 : static_cast<double>(lai_count_) / total_; }

  private:
    double bin_width_;
    double lai_threshold_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
    std::uint64_t lai_count_ = 0;
};

/// Builds the histogram from a sample index (JSON Lines with an "ai" field).
/// A missing or out-of-range ai raises ValidationError naming the line.
AiHistogram histogram(const std::filesystem::path& sample_index, double bin_width = 1.0,
                      double lai_threshold = kLaiThreshold);

/// "bin,count" rows, bin given by its lower edge.
void write_histogram_csv(std::ostream& out, const AiHistogram& hist);

/// {"total", "lai_count", "lai_fraction", "lai_threshold", "bin_width"}
nlohmann::ordered_json histogram_summary(const AiHistogram& hist);

} // namespace swellkit
