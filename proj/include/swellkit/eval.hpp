#pragma once

#include "swellkit/geometry.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace swellkit {

/// Per-frame boxes; nullopt marks an absent box (no ground truth, or no prediction).
using Track = std::vector<std::optional<BBox>>;

struct TrackSequence {
    std::string name;
    Track gt;
    std::map<std::string, Track> pred; // keyed by tracker name
    std::set<std::string> attributes;
    std::optional<double> fps_declared;
};

inline constexpr std::size_t kCurvePoints = 51;
using Curve = std::array<double, kCurvePoints>;

/// Thresholds sampled by the three curves.
double iou_threshold(std::size_t i);  // i / 50        -> 0, 0.02, ..., 1
double cle_threshold(std::size_t i);  // i             -> 0, 1, ..., 50 px
double norm_threshold(std::size_t i); // i / 100       -> 0, 0.01, ..., 0.5

inline constexpr std::size_t kPrecisionIndex = 20; // 20 px

/// Curves of one tracker on one sequence. Frames without ground truth are
/// skipped everywhere. A frame with no prediction counts as a miss.
struct SequenceCurves {
    Curve success{};        // fraction with IoU > t
    Curve precision{};      // fraction with CLE <= t
    Curve norm_precision{}; // fraction with |(dcx/w_gt, dcy/h_gt)| <= t
    std::size_t frames = 0;
    /// Evaluable frames left out of norm_precision because the gt box has zero size.
    std::size_t norm_excluded = 0;
};

/// Throws EvaluationError when the sequence has no evaluable frame, the
/// tracker is unknown, or the prediction length differs from the gt length.
SequenceCurves evaluate_sequence(const TrackSequence& seq, const std::string& tracker);

Curve success_curve(const TrackSequence& seq, const std::string& tracker);
Curve precision_curve(const TrackSequence& seq, const std::string& tracker);
Curve norm_precision_curve(const TrackSequence& seq, const std::string& tracker);

double curve_mean(const Curve& curve);

struct MetricTriple {
    double auc = 0.0;    // mean of the success curve
    double p_norm = 0.0; // mean of the normalized precision curve
    double p = 0.0;      // precision at 20 px
    std::size_t sequences = 0;
};

/// Scores over a set of sequences: each curve is the mean of per-sequence curves.
struct AggregateScores {
    MetricTriple triple;
    Curve success{};
    Curve precision{};
    Curve norm_precision{};
    std::size_t norm_excluded = 0;
};

AggregateScores aggregate(std::span<const TrackSequence> sequences, const std::string& tracker);

struct AttributeReport {
    std::map<std::string, MetricTriple> by_tag;
    std::vector<std::string> warnings;
};

/// Triple per requested tag over the sequences carrying it. A tag that no
/// sequence carries is left out and reported as a warning.
AttributeReport attribute_report(std::span<const TrackSequence> sequences, const std::string& tracker,
                                 const std::vector<std::string>& tags);

struct TrackerResult {
    std::string tracker;
    AggregateScores overall;
    std::map<std::string, MetricTriple> by_attribute;
};

struct EvalReport {
    std::vector<TrackerResult> ranking; // AUC desc, then P_Norm desc, then name
    std::vector<std::string> attributes;
    std::vector<std::string> warnings;
};

/// One-pass evaluation of every tracker present in the sequences. When `tags`
/// is empty, every tag found on any sequence is reported.
EvalReport evaluate(std::span<const TrackSequence> sequences, const std::vector<std::string>& tags = {});

struct CleStreamResult {
    std::vector<bool> success;
    double fraction = 0.0;
};

/// Frame i succeeds iff cle[i] <= threshold. An empty series has fraction 0.
CleStreamResult cle_stream_success(std::span<const double> cle_series, double threshold_px = 20.0);

// --- file formats ---------------------------------------------------------

/// One box per line, "x,y,w,h" (commas, tabs or spaces); "NaN,NaN,NaN,NaN"
/// marks an absent frame. Throws ParseError naming the line.
Track read_track_file(const std::filesystem::path& path);

/// Loads every <name>.txt under gt_dir and the same file from each prediction
/// directory (tracker name = directory name). attributes_file, when given, is a
/// JSON object {sequence: [tags]}. Missing prediction files raise EvaluationError.
std::vector<TrackSequence> load_benchmark(const std::filesystem::path& gt_dir,
                                          const std::vector<std::filesystem::path>& pred_dirs,
                                          const std::optional<std::filesystem::path>& attributes_file,
                                          std::vector<std::string>* warnings = nullptr);

/// Ranking table: rank,tracker,auc,p_norm,p,sequences then <tag>_auc,<tag>_p_norm,<tag>_p per attribute.
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);

/// idx,iou_threshold,success,cle_threshold,precision,norm_threshold,norm_precision
void write_curves_csv(const std::filesystem::path& path, const TrackerResult& result);

} // namespace swellkit
