// swellkit: segment -> swell -> stats -> eval pipeline, plus the alignment demo.
//
// Exit codes: 0 success, 1 fatal error or bad usage, 2 partial failure.

#include "swellkit/errors.hpp"
#include "swellkit/eval.hpp"
#include "swellkit/image_io.hpp"
#include "swellkit/manifest.hpp"
#include "swellkit/mmd.hpp"
#include "swellkit/parallel.hpp"
#include "swellkit/run_config.hpp"
#include "swellkit/sam_client.hpp"
#include "swellkit/stats.hpp"
#include "swellkit/swelling.hpp"
#include "swellkit/synthetic_segmenter.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

namespace fs = std::filesystem;
using namespace swellkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

struct KeySpec {
    std::string name;
    std::string default_value;
    std::string help;
    bool multi = false;
};

struct CommandSpec {
    std::string name;
    std::string description;
    std::vector<KeySpec> keys;
};

const std::vector<CommandSpec>& commands() {
    static const std::vector<CommandSpec> specs = {
        {"segment",
         "Produce a mask manifest (JSON Lines) for a directory of PNG images",
         {{"backend", "synthetic", "mask source: synthetic | service"},
          {"endpoint", "", "sidecar base URL for --backend service (env SWELLKIT_SAM_ENDPOINT)"},
          {"images", "", "directory of input PNG images"},
          {"out", "", "manifest file to write"},
          {"luma-threshold", "40", "synthetic backend: foreground is luma strictly above this"},
          {"min-area", "16", "synthetic backend: smallest component kept, in pixels"},
          {"timeout-ms", "30000", "service backend: per-request timeout"},
          {"retries", "2", "service backend: retries after a failed request"},
          {"jobs", "0", "worker threads (0 = all cores)"}}},
        {"swell",
         "Generate template/search training samples from every mask of every image",
         {{"manifest", "", "mask manifest (JSON Lines)"},
          {"images", "", "root directory the manifest image paths are relative to"},
          {"out", "", "sample store directory"},
          {"ratio", "1.0", "fraction of images to use, in (0, 1]"},
          {"seed", "0", "subsampling seed"},
          {"min-area", "64", "drop masks smaller than this many pixels"},
          {"max-per-image", "64", "keep at most this many (largest) masks per image"},
          {"template-size", "127", "template patch side in pixels"},
          {"search-size", "255", "search patch side in pixels"},
          {"context", "0.5", "context amount around the box"},
          {"jobs", "0", "worker threads (0 = all cores)"}}},
        {"stats",
         "Ambient-intensity histogram and low-light share of a sample store",
         {{"index", "", "sample index (index.jsonl of a sample store)"},
          {"csv", "", "write the bin,count histogram here (default: not written)"},
          {"summary", "", "write the JSON summary here (default: stdout)"},
          {"bin-width", "1", "histogram bin width"},
          {"lai-threshold", "20", "AI strictly below this counts as low ambient intensity"}}},
        {"eval",
         "One-pass evaluation of tracker predictions against ground truth",
         {{"gt", "", "directory of ground-truth <sequence>.txt files"},
          {"pred", "", "prediction directory per tracker (repeatable)", true},
          {"attributes", "", "JSON {sequence: [tags]} (optional)"},
          {"tags", "", "comma-separated attribute tags to report (default: all present)"},
          {"report", "", "ranking CSV to write; curves go next to it as <stem>.<tracker>.curves.csv"}}},
        {"align-demo",
         "Adversarial day/night feature alignment on synthetic Gaussians",
         {{"steps", "6000", "training steps (>= 1)"},
          {"lr", "0.3", "learning rate"},
          {"lambda", "0.1", "gradient reversal strength"},
          {"seed", "7", "seed for data and initial weights"},
          {"src-mean", "0,0", "source feature mean (comma separated)"},
          {"tgt-mean", "3,0", "target feature mean (comma separated)"},
          {"cov", "1.0", "isotropic variance of both domains"},
          {"hidden", "16", "discriminator hidden width"},
          {"train-size", "256", "training vectors per domain"},
          {"heldout-size", "512", "held-out vectors per domain"},
          {"report", "", "write the JSON report here (default: stdout)"},
          {"trace", "", "write the step,loss CSV here (default: not written)"}}},
    };
    return specs;
}

std::set<std::string> all_keys() {
    std::set<std::string> keys;
    for (const auto& c : commands()) {
        for (const auto& k : c.keys) {
            keys.insert(k.name);
        }
    }
    return keys;
}

struct ParsedCommand {
    const CommandSpec* spec = nullptr;
    std::map<std::string, std::optional<std::string>> single;
    std::map<std::string, std::vector<std::string>> multi;
};

RunConfig resolve(const ParsedCommand& cmd, const std::optional<std::string>& config_path) {
    RunConfig cfg(cmd.spec->name, all_keys());
    for (const auto& k : cmd.spec->keys) {
        cfg.declare(k.name, k.default_value);
    }
    if (config_path) {
        cfg.load_file(*config_path);
    }
    cfg.load_env({{"endpoint", kSamEndpointEnv}});
    for (const auto& [key, value] : cmd.single) {
        if (value) {
            cfg.set(key, *value, ConfigSource::Flag, "--" + key);
        }
    }
    for (const auto& [key, values] : cmd.multi) {
        if (!values.empty()) {
            std::string joined;
            for (const auto& v : values) {
                joined += (joined.empty() ? "" : ",") + v;
            }
            cfg.set(key, joined, ConfigSource::Flag, "--" + key);
        }
    }
    return cfg;
}

const std::string& required(const RunConfig& cfg, const std::string& key) {
    const auto& v = cfg.str(key);
    if (v.empty()) {
        throw InvalidArgument("--" + key + " is required");
    }
    return v;
}

std::uint32_t to_u32(const RunConfig& cfg, const std::string& key) {
    const auto v = cfg.unsigned_integer(key);
    if (v > std::numeric_limits<std::uint32_t>::max()) {
        throw InvalidArgument("--" + key + " is too large");
    }
    return static_cast<std::uint32_t>(v);
}

std::vector<double> to_vector(const RunConfig& cfg, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : cfg.list(key)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw InvalidArgument("--" + key + ": '" + item + "' is not a number");
        }
    }
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out || !(out << text)) {
        throw IoError("cannot write " + path);
    }
}

// --- segment ---------------------------------------------------------------

int run_segment(const RunConfig& cfg) {
    const std::string backend = cfg.str("backend");
    if (backend != "synthetic" && backend != "service") {
        throw InvalidArgument("--backend must be 'synthetic' or 'service'");
    }
    const fs::path images = required(cfg, "images");
    const fs::path out = required(cfg, "out");
    const auto threshold = cfg.unsigned_integer("luma-threshold");
    if (threshold > 255) {
        throw InvalidArgument("--luma-threshold must be at most 255");
    }
    const auto min_area = cfg.unsigned_integer("min-area");

    std::optional<SamClient> client;
    if (backend == "service") {
        const auto& endpoint = cfg.str("endpoint");
        if (endpoint.empty()) {
            throw InvalidArgument("--backend service needs --endpoint or " + std::string(kSamEndpointEnv));
        }
        client.emplace(SamClientOptions{endpoint, static_cast<int>(cfg.integer("timeout-ms")),
                                        static_cast<int>(cfg.integer("retries"))});
    }

    if (!fs::is_directory(images)) {
        throw IoError("image directory " + images.string() + " does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(images)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            files.push_back(entry.path().filename());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<std::optional<std::string>> lines(files.size());
    std::vector<std::string> errors(files.size());
    parallel_for(files.size(), static_cast<unsigned>(cfg.unsigned_integer("jobs")), [&](std::size_t i) {
        const std::string id = files[i].stem().string();
        try {
            const NightImage image = read_png(images / files[i]);
            MaskSet masks = client ? client->segment(image, id)
                                   : synthetic_segment(image, static_cast<std::uint8_t>(threshold), min_area, id);
            lines[i] = to_manifest_line(ManifestRecord{files[i].string(), std::move(masks)});
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });

    std::ofstream manifest(out, std::ios::trunc);
    if (!manifest) {
        throw IoError("cannot write " + out.string());
    }
    std::size_t failed = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (lines[i]) {
            manifest << *lines[i] << '\n';
        } else {
            ++failed;
            spdlog::error("{}: {}", files[i].string(), errors[i]);
        }
    }
    if (!manifest.flush()) {
        throw IoError("failed writing " + out.string());
    }
    spdlog::info("segmented {} of {} images into {}", files.size() - failed, files.size(), out.string());
    return failed > 0 ? kExitPartial : kExitOk;
}

// --- swell -----------------------------------------------------------------

int run_swell(const RunConfig& cfg) {
    SwellConfig sc;
    sc.crop.template_size = to_u32(cfg, "template-size");
    sc.crop.search_size = to_u32(cfg, "search-size");
    sc.crop.context_amount = cfg.number("context");
    sc.min_area = cfg.unsigned_integer("min-area");
    sc.max_samples_per_image = to_u32(cfg, "max-per-image");
    sc.ratio = cfg.number("ratio");
    sc.seed = cfg.unsigned_integer("seed");
    sc.validate();

    const auto report = swell_dataset(required(cfg, "manifest"), required(cfg, "images"), sc, required(cfg, "out"),
                                      static_cast<unsigned>(cfg.unsigned_integer("jobs")));
    for (const auto& e : report.errors) {
        spdlog::error("{}: {}", e.image_id, e.message);
    }
    std::cout << report_to_json(report).dump(2) << '\n';
    return report.images_failed > 0 ? kExitPartial : kExitOk;
}

// --- stats -----------------------------------------------------------------

int run_stats(const RunConfig& cfg) {
    const auto hist = histogram(required(cfg, "index"), cfg.number("bin-width"), cfg.number("lai-threshold"));
    if (const auto& csv = cfg.str("csv"); !csv.empty()) {
        std::ofstream out(csv, std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + csv);
        }
        write_histogram_csv(out, hist);
    }
    write_text(cfg.str("summary"), histogram_summary(hist).dump(2) + "\n");
    return kExitOk;
}

// --- eval ------------------------------------------------------------------

int run_eval(const RunConfig& cfg) {
    const fs::path report_path = required(cfg, "report");
    std::vector<fs::path> preds;
    for (const auto& p : cfg.list("pred")) {
        preds.emplace_back(p);
    }
    if (preds.empty()) {
        throw InvalidArgument("--pred is required");
    }
    std::optional<fs::path> attributes;
    if (const auto& a = cfg.str("attributes"); !a.empty()) {
        attributes = a;
    }

    std::vector<std::string> warnings;
    const auto sequences = load_benchmark(required(cfg, "gt"), preds, attributes, &warnings);
    const auto report = evaluate(sequences, cfg.list("tags"));
    warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
    for (const auto& w : warnings) {
        spdlog::warn("{}", w);
    }

    write_report_csv(report_path, report);
    const fs::path dir = report_path.parent_path();
    for (const auto& result : report.ranking) {
        write_curves_csv(dir / (report_path.stem().string() + "." + result.tracker + ".curves.csv"), result);
    }

    std::cout << fmt::format("{:<4} {:<24} {:>8} {:>8} {:>8}\n", "rank", "tracker", "AUC", "P_Norm", "P");
    for (std::size_t r = 0; r < report.ranking.size(); ++r) {
        const auto& t = report.ranking[r].overall.triple;
        std::cout << fmt::format("{:<4} {:<24} {:>8.3f} {:>8.3f} {:>8.3f}\n", r + 1, report.ranking[r].tracker,
                                 t.auc, t.p_norm, t.p);
    }
    return kExitOk;
}

// --- align-demo ------------------------------------------------------------

int run_align_demo(const RunConfig& cfg) {
    DemoConfig dc;
    dc.steps = cfg.unsigned_integer("steps");
    dc.lr = cfg.number("lr");
    dc.lambda = cfg.number("lambda");
    dc.seed = cfg.unsigned_integer("seed");
    dc.src_mean = to_vector(cfg, "src-mean");
    dc.tgt_mean = to_vector(cfg, "tgt-mean");
    dc.cov = cfg.number("cov");
    dc.hidden = cfg.unsigned_integer("hidden");
    dc.train_size = cfg.unsigned_integer("train-size");
    dc.heldout_size = cfg.unsigned_integer("heldout-size");
    dc.validate();

    DemoReport report;
    try {
        report = run_demo(dc);
    } catch (const DivergenceError& e) {
        spdlog::error("training diverged: {} (last finite state after {} steps)", e.what(),
                      e.last_finite_state().steps);
        return kExitFatal;
    }
    write_text(cfg.str("report"), demo_report_to_json(dc, report).dump(2) + "\n");
    if (const auto& trace = cfg.str("trace"); !trace.empty()) {
        std::ofstream out(trace, std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + trace);
        }
        write_loss_trace_csv(out, report);
    }
    return kExitOk;
}

using Handler = int (*)(const RunConfig&);

Handler handler_for(const std::string& name) {
    if (name == "segment") return run_segment;
    if (name == "swell") return run_swell;
    if (name == "stats") return run_stats;
    if (name == "eval") return run_eval;
    return run_align_demo;
}

} // namespace

int main(int argc, char** argv) {
    auto logger = spdlog::stderr_logger_st("swellkit");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);

    CLI::App app{"swellkit: one-to-many training-sample swelling and tracking evaluation"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every command");

    std::optional<std::string> config_path;
    bool show_config = false;
    std::vector<ParsedCommand> parsed(commands().size());
    std::vector<CLI::App*> subs;
    for (std::size_t c = 0; c < commands().size(); ++c) {
        const auto& spec = commands()[c];
        parsed[c].spec = &spec;
        auto* sub = app.add_subcommand(spec.name, spec.description);
        sub->add_option("--config", config_path, "key = value config file; flags > env > file > defaults");
        sub->add_flag("--show-config", show_config, "print every effective setting and its source to stderr");
        for (const auto& key : spec.keys) {
            if (key.multi) {
                sub->add_option("--" + key.name, parsed[c].multi[key.name], key.help);
            } else {
                auto* opt = sub->add_option("--" + key.name, parsed[c].single[key.name], key.help);
                opt->default_str(key.default_value);
            }
        }
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFatal;
    }

    for (std::size_t c = 0; c < subs.size(); ++c) {
        if (!subs[c]->parsed()) {
            continue;
        }
        try {
            const RunConfig cfg = resolve(parsed[c], config_path);
            if (show_config) {
                std::cerr << cfg.describe();
            }
            return handler_for(commands()[c].name)(cfg);
        } catch (const InvalidArgument& e) {
            spdlog::error("{}", e.what());
            std::cerr << "Run with --help for usage.\n";
            return kExitFatal;
        } catch (const std::exception& e) {
            spdlog::error("{}", e.what());
            return kExitFatal;
        }
    }
    return kExitFatal;
}
