#include "swellkit/eval.hpp"

#include "swellkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swellkit {

double iou_threshold(std::size_t i) { return static_cast<double>(i) / 50.0; }
double cle_threshold(std::size_t i) { return static_cast<double>(i); }
double norm_threshold(std::size_t i) { return static_cast<double>(i) / 100.0; }

double curve_mean(const Curve& curve) {
    double sum = 0.0;
    for (double v : curve) {
        sum += v;
    }
    return sum / static_cast<double>(curve.size());
}

SequenceCurves evaluate_sequence(const TrackSequence& seq, const std::string& tracker) {
    auto it = seq.pred.find(tracker);
    if (it == seq.pred.end()) {
        throw EvaluationError("sequence '" + seq.name + "' has no predictions from '" + tracker + "'");
    }
    const Track& pred = it->second;
    if (pred.size() != seq.gt.size()) {
        throw EvaluationError("sequence '" + seq.name + "': tracker '" + tracker + "' has " +
                              std::to_string(pred.size()) + " frames, ground truth has " +
                              std::to_string(seq.gt.size()));
    }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> overlaps, errors, norm_errors;
    SequenceCurves out;
    for (std::size_t f = 0; f < seq.gt.size(); ++f) {
        if (!seq.gt[f]) {
            continue;
        }
        const BBox& g = *seq.gt[f];
        const auto& p = pred[f];
        overlaps.push_back(p ? iou(*p, g) : 0.0);
        errors.push_back(p ? cle(*p, g) : kInf);
        if (g.w > 0.0 && g.h > 0.0) {
            norm_errors.push_back(p ? std::hypot((p->center_x() - g.center_x()) / g.w,
                                                 (p->center_y() - g.center_y()) / g.h)
                                    : kInf);
        } else {
            ++out.norm_excluded;
        }
    }
    if (overlaps.empty()) {
        throw EvaluationError("sequence '" + seq.name + "' has no frame with ground truth");
    }
    if (norm_errors.empty()) {
        throw EvaluationError("sequence '" + seq.name + "' has no ground-truth box with positive size");
    }
    out.frames = overlaps.size();

    auto fraction = [](const std::vector<double>& values, auto&& pass) {
        std::size_t hits = 0;
        for (double v : values) {
            hits += pass(v) ? 1 : 0;
        }
        return static_cast<double>(hits) / static_cast<double>(values.size());
    };
    for (std::size_t i = 0; i < kCurvePoints; ++i) {
        const double ti = iou_threshold(i), tc = cle_threshold(i), tn = norm_threshold(i);
        out.success[i] = fraction(overlaps, [ti](double v) { return v > ti; });
        out.precision[i] = fraction(errors, [tc](double v) { return v <= tc; });
        out.norm_precision[i] = fraction(norm_errors, [tn](double v) { return v <= tn; });
    }
    return out;
}

Curve success_curve(const TrackSequence& seq, const std::string& tracker) {
    return evaluate_sequence(seq, tracker).success;
}

Curve precision_curve(const TrackSequence& seq, const std::string& tracker) {
    return evaluate_sequence(seq, tracker).precision;
}

Curve norm_precision_curve(const TrackSequence& seq, const std::string& tracker) {
    return evaluate_sequence(seq, tracker).norm_precision;
}

AggregateScores aggregate(std::span<const TrackSequence> sequences, const std::string& tracker) {
    if (sequences.empty()) {
        throw EvaluationError("no sequences to evaluate");
    }
    AggregateScores agg;
    for (const auto& seq : sequences) {
        const auto c = evaluate_sequence(seq, tracker);
        for (std::size_t i = 0; i < kCurvePoints; ++i) {
            agg.success[i] += c.success[i];
            agg.precision[i] += c.precision[i];
            agg.norm_precision[i] += c.norm_precision[i];
        }
        agg.norm_excluded += c.norm_excluded;
    }
    const auto n = static_cast<double>(sequences.size());
    for (std::size_t i = 0; i < kCurvePoints; ++i) {
        agg.success[i] /= n;
        agg.precision[i] /= n;
        agg.norm_precision[i] /= n;
    }
    agg.triple = MetricTriple{curve_mean(agg.success), curve_mean(agg.norm_precision),
                              agg.precision[kPrecisionIndex], sequences.size()};
    return agg;
}

AttributeReport attribute_report(std::span<const TrackSequence> sequences, const std::string& tracker,
                                 const std::vector<std::string>& tags) {
    AttributeReport report;
    for (const auto& tag : tags) {
        std::vector<TrackSequence> subset;
        for (const auto& seq : sequences) {
            if (seq.attributes.contains(tag)) {
                subset.push_back(seq);
            }
        }
        if (subset.empty()) {
            report.warnings.push_back("attribute '" + tag + "' has no sequences; omitted");
            continue;
        }
        report.by_tag[tag] = aggregate(subset, tracker).triple;
    }
    return report;
}

EvalReport evaluate(std::span<const TrackSequence> sequences, const std::vector<std::string>& tags) {
    if (sequences.empty()) {
        throw EvaluationError("no sequences to evaluate");
    }
    std::set<std::string> trackers;
    for (const auto& [name, track] : sequences.front().pred) {
        trackers.insert(name);
    }
    std::vector<std::string> wanted = tags;
    if (wanted.empty()) {
        std::set<std::string> present;
        for (const auto& seq : sequences) {
            present.insert(seq.attributes.begin(), seq.attributes.end());
        }
        wanted.assign(present.begin(), present.end());
    }

    EvalReport report;
    bool first = true;
    for (const auto& name : trackers) {
        TrackerResult result;
        result.tracker = name;
        result.overall = aggregate(sequences, name);
        auto attrs = attribute_report(sequences, name, wanted);
        result.by_attribute = std::move(attrs.by_tag);
        if (first) {
            report.warnings = std::move(attrs.warnings);
            for (const auto& [tag, triple] : result.by_attribute) {
                report.attributes.push_back(tag);
            }
            first = false;
        }
        report.ranking.push_back(std::move(result));
    }
    std::sort(report.ranking.begin(), report.ranking.end(), [](const TrackerResult& a, const TrackerResult& b) {
        if (a.overall.triple.auc != b.overall.triple.auc) {
            return a.overall.triple.auc > b.overall.triple.auc;
        }
        if (a.overall.triple.p_norm != b.overall.triple.p_norm) {
            return a.overall.triple.p_norm > b.overall.triple.p_norm;
        }
        return a.tracker < b.tracker;
    });
    return report;
}

CleStreamResult cle_stream_success(std::span<const double> cle_series, double threshold_px) {
    CleStreamResult out;
    out.success.reserve(cle_series.size());
    std::size_t hits = 0;
    for (double v : cle_series) {
        const bool ok = v <= threshold_px;
        out.success.push_back(ok);
        hits += ok ? 1 : 0;
    }
    out.fraction = cle_series.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(cle_series.size());
    return out;
}

} // namespace swellkit
