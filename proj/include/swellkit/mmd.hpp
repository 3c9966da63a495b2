#pragma once

#include "swellkit/adapt.hpp"

namespace swellkit {

/// Unbiased estimate of squared MMD with k(x, y) = exp(-|x - y|^2 / (2 bandwidth^2)),
/// clamped at 0. Needs at least two vectors per batch.
double mmd(const FeatureBatch& a, const FeatureBatch& b, double bandwidth);

/// Biased (V-statistic) estimate, always >= 0 up to rounding.
double mmd_biased(const FeatureBatch& a, const FeatureBatch& b, double bandwidth);

/// Median pairwise distance over the pooled vectors.
double median_bandwidth(const FeatureBatch& a, const FeatureBatch& b);

struct DemoConfig {
    std::uint64_t steps = 6000;
    double lr = 0.3;
    double lambda = 0.1;
    std::uint64_t seed = 7;
    std::vector<double> src_mean{0.0, 0.0};
    std::vector<double> tgt_mean{3.0, 0.0};
    double cov = 1.0; // isotropic variance of both domains
    std::size_t hidden = 16;
    std::size_t train_size = 256; // per domain
    std::size_t heldout_size = 512; // per domain

    void validate() const;
};

struct DemoReport {
    double bandwidth = 0.0;
    double mmd_before = 0.0;
    double mmd_after = 0.0;
    double disc_acc_heldout = 0.0;
    std::vector<double> loss_trace;
    AlignState final_state;
};

/// Draws seeded Gaussian source/target features, trains for `steps` full-batch
/// steps and measures the domain gap on held-out features before and after
/// alignment. Bandwidth is the median heuristic on the held-out data before
/// alignment and is reused for the "after" figure.
DemoReport run_demo(const DemoConfig& cfg);

nlohmann::ordered_json demo_report_to_json(const DemoConfig& cfg, const DemoReport& report);

/// "step,loss" rows.
void write_loss_trace_csv(std::ostream& out, const DemoReport& report);

} // namespace swellkit
