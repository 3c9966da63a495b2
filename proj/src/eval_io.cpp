#include "swellkit/errors.hpp"
#include "swellkit/eval.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace swellkit {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',' || ch == '\t' || ch == ' ' || ch == '\r') {
            if (!cur.empty()) {
                fields.push_back(cur);
                cur.clear();
            }
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) {
        fields.push_back(cur);
    }
    return fields;
}

bool is_nan_token(const std::string& s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return lower == "nan";
}

double parse_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ParseError(line, "bad number '" + s + "'");
    }
    return v;
}

std::string tracker_name(const fs::path& dir) {
    auto p = dir;
    if (!p.has_filename()) {
        p = p.parent_path();
    }
    return p.filename().string();
}

std::string fmt_score(double v) {
    return fmt::format("{:.6f}", v);
}

} // namespace

Track read_track_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    Track track;
    std::string text;
    std::size_t line = 0;
    std::size_t blank_run = 0;
    while (std::getline(in, text)) {
        ++line;
        auto fields = split_fields(text);
        if (fields.empty()) {
            ++blank_run;
            continue;
        }
        if (blank_run > 0) {
            throw ParseError(line, path.string() + ": blank line inside box list");
        }
        if (fields.size() != 4) {
            throw ParseError(line, path.string() + ": expected 4 values, got " + std::to_string(fields.size()));
        }
        const auto nans = std::count_if(fields.begin(), fields.end(), is_nan_token);
        if (nans == 4) {
            track.emplace_back(std::nullopt);
            continue;
        }
        if (nans != 0) {
            throw ParseError(line, path.string() + ": partially NaN box");
        }
        BBox box{parse_number(fields[0], line), parse_number(fields[1], line), parse_number(fields[2], line),
                 parse_number(fields[3], line)};
        if (!box.is_valid()) {
            throw ParseError(line, path.string() + ": negative box extent");
        }
        track.emplace_back(box);
    }
    return track;
}

std::vector<TrackSequence> load_benchmark(const fs::path& gt_dir, const std::vector<fs::path>& pred_dirs,
                                          const std::optional<fs::path>& attributes_file,
                                          std::vector<std::string>* warnings) {
    if (!fs::is_directory(gt_dir)) {
        throw IoError("ground-truth directory " + gt_dir.string() + " does not exist");
    }
    if (pred_dirs.empty()) {
        throw InvalidArgument("at least one prediction directory is required");
    }
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(gt_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            names.push_back(entry.path().stem().string());
        }
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) {
        throw EvaluationError("no sequence files in " + gt_dir.string());
    }

    std::map<std::string, std::set<std::string>> tags;
    if (attributes_file) {
        std::ifstream in(*attributes_file);
        if (!in) {
            throw IoError("cannot open " + attributes_file->string());
        }
        auto doc = nlohmann::json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw ParseError(1, attributes_file->string() + ": expected a JSON object {sequence: [tags]}");
        }
        for (const auto& [seq, list] : doc.items()) {
            if (!list.is_array()) {
                throw ParseError(1, attributes_file->string() + ": tags of '" + seq + "' must be an array");
            }
            for (const auto& t : list) {
                if (!t.is_string()) {
                    throw ParseError(1, attributes_file->string() + ": tags must be strings");
                }
                tags[seq].insert(t.get<std::string>());
            }
            if (warnings && !std::binary_search(names.begin(), names.end(), seq)) {
                warnings->push_back("attributes given for unknown sequence '" + seq + "'");
            }
        }
    }

    std::set<std::string> trackers;
    for (const auto& dir : pred_dirs) {
        if (!trackers.insert(tracker_name(dir)).second) {
            throw InvalidArgument("two prediction directories share the tracker name '" + tracker_name(dir) + "'");
        }
    }

    std::vector<TrackSequence> sequences;
    for (const auto& name : names) {
        TrackSequence seq;
        seq.name = name;
        seq.gt = read_track_file(gt_dir / (name + ".txt"));
        if (auto it = tags.find(name); it != tags.end()) {
            seq.attributes = it->second;
        }
        for (const auto& dir : pred_dirs) {
            const fs::path file = dir / (name + ".txt");
            if (!fs::exists(file)) {
                throw EvaluationError("missing prediction file " + file.string());
            }
            auto track = read_track_file(file);
            if (track.size() != seq.gt.size()) {
                throw EvaluationError(file.string() + " has " + std::to_string(track.size()) +
                                      " frames, ground truth has " + std::to_string(seq.gt.size()));
            }
            seq.pred[tracker_name(dir)] = std::move(track);
        }
        sequences.push_back(std::move(seq));
    }
    return sequences;
}

void write_report_csv(const fs::path& path, const EvalReport& report) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "# one-pass evaluation; auc = mean success over 51 IoU thresholds 0..1 (IoU > t); "
           "p = precision at CLE <= 20 px; p_norm = mean normalized precision over 51 thresholds 0..0.5; "
           "curves averaged over sequences\n";
    out << "rank,tracker,auc,p_norm,p,sequences";
    for (const auto& tag : report.attributes) {
        out << ',' << tag << "_auc," << tag << "_p_norm," << tag << "_p";
    }
    out << '\n';
    for (std::size_t r = 0; r < report.ranking.size(); ++r) {
        const auto& res = report.ranking[r];
        const auto& t = res.overall.triple;
        out << (r + 1) << ',' << res.tracker << ',' << fmt_score(t.auc) << ',' << fmt_score(t.p_norm) << ','
            << fmt_score(t.p) << ',' << t.sequences;
        for (const auto& tag : report.attributes) {
            auto it = res.by_attribute.find(tag);
            if (it == res.by_attribute.end()) {
                out << ",,,";
            } else {
                out << ',' << fmt_score(it->second.auc) << ',' << fmt_score(it->second.p_norm) << ','
                    << fmt_score(it->second.p);
            }
        }
        out << '\n';
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

void write_curves_csv(const fs::path& path, const TrackerResult& result) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "idx,iou_threshold,success,cle_threshold,precision,norm_threshold,norm_precision\n";
    const auto& o = result.overall;
    for (std::size_t i = 0; i < kCurvePoints; ++i) {
        out << fmt::format("{},{:.2f},{:.6f},{:.0f},{:.6f},{:.2f},{:.6f}\n", i, iou_threshold(i), o.success[i],
                           cle_threshold(i), o.precision[i], norm_threshold(i), o.norm_precision[i]);
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace swellkit
