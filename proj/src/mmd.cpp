#include "swellkit/mmd.hpp"

#include "swellkit/random.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace swellkit {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d2 += t * t;
    }
    return d2;
}

struct KernelSums {
    double aa = 0.0; // over i != j
    double bb = 0.0; // over i != j
    double ab = 0.0;
};

KernelSums kernel_sums(const FeatureBatch& a, const FeatureBatch& b, double bandwidth) {
    a.validate();
    b.validate();
    if (a.dim != b.dim) {
        throw InvalidArgument("mmd batches differ in dimension");
    }
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InvalidArgument("mmd bandwidth must be positive");
    }
    const double gamma = 1.0 / (2.0 * bandwidth * bandwidth);
    auto k = [gamma](std::span<const double> x, std::span<const double> y) {
        return std::exp(-gamma * squared_distance(x, y));
    };
    KernelSums s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            s.aa += 2.0 * k(a.row(i), a.row(j));
        }
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            s.bb += 2.0 * k(b.row(i), b.row(j));
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            s.ab += k(a.row(i), b.row(j));
        }
    }
    return s;
}

FeatureBatch gaussian_batch(Rng& rng, Domain domain, const std::vector<double>& mean, double cov, std::size_t n) {
    FeatureBatch batch{domain, mean.size(), {}};
    batch.values.reserve(n * mean.size());
    const double sd = std::sqrt(cov);
    for (std::size_t i = 0; i < n; ++i) {
        for (double mu : mean) {
            batch.values.push_back(mu + sd * standard_normal(rng));
        }
    }
    return batch;
}

FeatureBatch aligned(const AlignParams& p, const FeatureBatch& batch) {
    FeatureBatch out{batch.domain, batch.dim, {}};
    out.values.reserve(batch.values.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto z = align(p, batch.row(i));
        out.values.insert(out.values.end(), z.begin(), z.end());
    }
    return out;
}

} // namespace

double mmd(const FeatureBatch& a, const FeatureBatch& b, double bandwidth) {
    if (a.size() < 2 || b.size() < 2) {
        throw InvalidArgument("unbiased mmd needs at least two vectors per batch");
    }
    const auto s = kernel_sums(a, b, bandwidth);
    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    const double value = s.aa / (m * (m - 1.0)) + s.bb / (n * (n - 1.0)) - 2.0 * s.ab / (m * n);
    return std::max(0.0, value);
}

double mmd_biased(const FeatureBatch& a, const FeatureBatch& b, double bandwidth) {
    const auto s = kernel_sums(a, b, bandwidth);
    const double m = static_cast<double>(a.size());
    const double n = static_cast<double>(b.size());
    // Diagonal terms k(x, x) = 1.
    return (s.aa + m) / (m * m) + (s.bb + n) / (n * n) - 2.0 * s.ab / (m * n);
}

double median_bandwidth(const FeatureBatch& a, const FeatureBatch& b) {
    a.validate();
    b.validate();
    if (a.dim != b.dim) {
        throw InvalidArgument("batches differ in dimension");
    }
    std::vector<std::span<const double>> pooled;
    for (std::size_t i = 0; i < a.size(); ++i) {
        pooled.push_back(a.row(i));
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        pooled.push_back(b.row(i));
    }
    std::vector<double> dist;
    dist.reserve(pooled.size() * (pooled.size() - 1) / 2);
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        for (std::size_t j = i + 1; j < pooled.size(); ++j) {
            dist.push_back(std::sqrt(squared_distance(pooled[i], pooled[j])));
        }
    }
    if (dist.empty()) {
        throw InvalidArgument("median bandwidth needs at least two vectors");
    }
    std::sort(dist.begin(), dist.end());
    const std::size_t mid = dist.size() / 2;
    const double median = dist.size() % 2 == 1 ? dist[mid] : 0.5 * (dist[mid - 1] + dist[mid]);
    if (!(median > 0.0)) {
        return 1.0; // all points coincide; any bandwidth gives the same zero gap
    }
    return median;
}

void DemoConfig::validate() const {
    if (steps < 1) {
        throw InvalidArgument("steps must be at least 1");
    }
    if (src_mean.empty() || src_mean.size() != tgt_mean.size()) {
        throw InvalidArgument("source and target means must have the same positive dimension");
    }
    if (!(cov > 0.0) || !std::isfinite(cov)) {
        throw InvalidArgument("cov must be positive");
    }
    if (hidden < 1 || train_size < 2 || heldout_size < 2) {
        throw InvalidArgument("hidden width must be positive and batch sizes at least 2");
    }
}

DemoReport run_demo(const DemoConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const auto src_train = gaussian_batch(rng, Domain::Source, cfg.src_mean, cfg.cov, cfg.train_size);
    const auto tgt_train = gaussian_batch(rng, Domain::Target, cfg.tgt_mean, cfg.cov, cfg.train_size);
    const auto src_hold = gaussian_batch(rng, Domain::Source, cfg.src_mean, cfg.cov, cfg.heldout_size);
    const auto tgt_hold = gaussian_batch(rng, Domain::Target, cfg.tgt_mean, cfg.cov, cfg.heldout_size);

    DemoReport report;
    report.bandwidth = median_bandwidth(src_hold, tgt_hold);
    report.mmd_before = mmd(src_hold, tgt_hold, report.bandwidth);

    AlignState state = AlignState::init(cfg.src_mean.size(), cfg.hidden, rng(), cfg.lambda, cfg.lr);
    report.loss_trace.reserve(cfg.steps);
    for (std::uint64_t step = 0; step < cfg.steps; ++step) {
        auto result = grad_step(state, src_train, tgt_train);
        report.loss_trace.push_back(result.loss);
        state = std::move(result.state);
    }

    report.mmd_after = mmd(src_hold, aligned(state.params, tgt_hold), report.bandwidth);
    report.disc_acc_heldout = disc_accuracy(state, src_hold, tgt_hold);
    report.final_state = std::move(state);
    return report;
}

nlohmann::ordered_json demo_report_to_json(const DemoConfig& cfg, const DemoReport& report) {
    nlohmann::ordered_json doc;
    doc["config"] = {{"steps", cfg.steps},         {"lr", cfg.lr},
                     {"lambda", cfg.lambda},       {"seed", cfg.seed},
                     {"src_mean", cfg.src_mean},   {"tgt_mean", cfg.tgt_mean},
                     {"cov", cfg.cov},             {"hidden", cfg.hidden},
                     {"train_size", cfg.train_size}, {"heldout_size", cfg.heldout_size}};
    doc["bandwidth"] = report.bandwidth;
    doc["bandwidth_rule"] = "median pairwise distance, held-out features before alignment";
    doc["mmd_before"] = report.mmd_before;
    doc["mmd_after"] = report.mmd_after;
    doc["mmd_ratio"] = report.mmd_before > 0.0 ? report.mmd_after / report.mmd_before : 0.0;
    doc["disc_acc_heldout"] = report.disc_acc_heldout;
    doc["final_loss"] = report.loss_trace.empty() ? 0.0 : report.loss_trace.back();
    const auto& p = report.final_state.params;
    doc["aligner"] = {{"weight", p.aligner_weight}, {"bias", p.aligner_bias}};
    return doc;
}

void write_loss_trace_csv(std::ostream& out, const DemoReport& report) {
    out << "step,loss\n";
    for (std::size_t i = 0; i < report.loss_trace.size(); ++i) {
        out << fmt::format("{},{:.17g}\n", i, report.loss_trace[i]);
    }
}

} // namespace swellkit
