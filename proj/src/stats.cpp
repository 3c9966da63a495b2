#include "swellkit/stats.hpp"

#include "swellkit/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

namespace swellkit {

double ambient_intensity(std::span<const std::uint8_t> rgb) {
    if (rgb.empty() || rgb.size() % 3 != 0) {
        throw InvalidArgument("ambient intensity needs a non-empty RGB buffer");
    }
    // Exact integer accumulation of 1000*luma; one rounding at the end.
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
        sum += luma_milli(rgb[i], rgb[i + 1], rgb[i + 2]);
    }
    const std::uint64_t n = rgb.size() / 3;
    return static_cast<double>(sum) / static_cast<double>(1000 * n);
}

double ambient_intensity(const Patch& patch) {
    return ambient_intensity(patch.pixels);
}

AiHistogram::AiHistogram(double bin_width, double lai_threshold)
    : bin_width_(bin_width), lai_threshold_(lai_threshold) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw InvalidArgument("histogram bin width must be positive");
    }
    counts_.assign(static_cast<std::size_t>(std::floor(255.0 / bin_width)) + 1, 0);
}

void AiHistogram::add(double ai) {
    if (!(ai >= 0.0 && ai <= 255.0)) {
        throw ValidationError("ambient intensity " + std::to_string(ai) + " outside [0, 255]");
    }
    auto bin = static_cast<std::size_t>(std::floor(ai / bin_width_));
    bin = std::min(bin, counts_.size() - 1);
    ++counts_[bin];
    ++total_;
    if (is_lai(ai, lai_threshold_)) {
        ++lai_count_;
    }
}

void AiHistogram::merge(const AiHistogram& other) {
    if (other.bin_width_ != bin_width_ || other.lai_threshold_ != lai_threshold_) {
        throw InvalidArgument("cannot merge histograms with different binning");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
    total_ += other.total_;
    lai_count_ += other.lai_count_;
}

AiHistogram histogram(const std::filesystem::path& sample_index, double bin_width, double lai_threshold) {
    std::ifstream in(sample_index);
    if (!in) {
        throw IoError("cannot open sample index " + sample_index.string());
    }
    AiHistogram hist(bin_width, lai_threshold);
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw ParseError(line, "sample index line is not a JSON object");
        }
        auto it = doc.find("ai");
        if (it == doc.end() || !it->is_number()) {
            throw ValidationError(line, "missing numeric 'ai'");
        }
        try {
            hist.add(it->get<double>());
        } catch (const ValidationError& e) {
            throw ValidationError(line, e.what());
        }
    }
    return hist;
}

void write_histogram_csv(std::ostream& out, const AiHistogram& hist) {
    out << "bin,count\n";
    for (std::size_t i = 0; i < hist.counts().size(); ++i) {
        out << fmt::format("{},{}\n", static_cast<double>(i) * hist.bin_width(), hist.counts()[i]);
    }
}

nlohmann::ordered_json histogram_summary(const AiHistogram& hist) {
    nlohmann::ordered_json doc;
    doc["total"] = hist.total();
    doc["lai_count"] = hist.lai_count();
    doc["lai_fraction"] = hist.lai_fraction();
    doc["lai_threshold"] = hist.lai_threshold();
    doc["bin_width"] = hist.bin_width();
    return doc;
}

} // namespace swellkit
