#include "oracles.hpp"

#include "swellkit/adapt.hpp"
#include "swellkit/errors.hpp"
#include "swellkit/mmd.hpp"
#include "swellkit/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace swellkit;

namespace {

FeatureBatch random_batch(Rng& rng, Domain d, std::size_t n, std::size_t dim, double shift) {
    FeatureBatch b{d, dim, {}};
    for (std::size_t i = 0; i < n * dim; ++i) {
        b.values.push_back(shift + standard_normal(rng));
    }
    return b;
}

AlignState random_state(Rng& rng, std::size_t dim, std::size_t hidden) {
    AlignState s;
    s.params = AlignParams::zeros(dim, hidden);
    auto flat = s.params.flatten();
    for (auto& v : flat) {
        v = 0.7 * standard_normal(rng);
    }
    s.params.assign(flat);
    s.lambda = uniform01(rng);
    s.lr = 0.01 + uniform01(rng);
    return s;
}

double relative_error(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

} // namespace

TEST(DiscForward, ZeroWeightsGiveOneHalf) {
    AlignState s;
    s.params = AlignParams::zeros(2, 16);
    const std::vector<double> x{3.0, -7.0};
    EXPECT_EQ(disc_forward(s, x, Domain::Source), 0.5);
    EXPECT_EQ(disc_forward(s, x, Domain::Target), 0.5);
}

TEST(DiscForward, HandSetWeights) {
    AlignState s;
    s.params = AlignParams::zeros(2, 1);
    s.params.aligner_weight = {1, 0, 0, 1};
    s.params.hidden_weight = {1, 2};
    s.params.output_weight = {3};
    s.params.output_bias = -1;
    const std::vector<double> x{1.0, 0.0};
    // sigmoid(3 * tanh(1) - 1), evaluated independently in Python.
    EXPECT_NEAR(disc_forward(s, x, Domain::Source), 0.7832627585290352, 1e-15);
    EXPECT_NEAR(disc_forward(s, x, Domain::Target), 0.7832627585290352, 1e-15);
}

TEST(DiscForward, AlignerAppliesToTargetOnly) {
    AlignState s;
    s.params = AlignParams::zeros(2, 1);
    s.params.aligner_weight = {0, 0, 0, 0};
    s.params.aligner_bias = {0, 0};
    s.params.hidden_weight = {1, 0};
    s.params.output_weight = {1};
    const std::vector<double> x{2.0, 0.0};
    EXPECT_EQ(disc_forward(s, x, Domain::Target), 0.5);
    EXPECT_GT(disc_forward(s, x, Domain::Source), 0.5);
    EXPECT_EQ(align(s.params, x), (std::vector<double>{0.0, 0.0}));
}

TEST(DiscForward, StaysInOpenInterval) {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto s = random_state(rng, 3, 5);
        const std::vector<double> x{standard_normal(rng), standard_normal(rng), standard_normal(rng)};
        const double p = disc_forward(s, x, i % 2 ? Domain::Source : Domain::Target);
        EXPECT_GT(p, 0.0);
        EXPECT_LT(p, 1.0);
    }
}

TEST(DiscForward, DimensionMismatch) {
    AlignState s;
    s.params = AlignParams::zeros(2, 4);
    const std::vector<double> x{1.0, 2.0, 3.0};
    EXPECT_THROW(disc_forward(s, x, Domain::Source), InvalidArgument);
}

TEST(Bce, LnTwoAtOneHalf) {
    EXPECT_EQ(bce_loss(0.5, 1), std::log(2.0));
    EXPECT_EQ(bce_loss(0.5, 0), std::log(2.0));
}

TEST(Bce, ClampKeepsExtremesFinite) {
    EXPECT_LE(bce_loss(1.0, 1), 1e-6);
    EXPECT_LE(bce_loss(0.0, 0), 1e-6);
    EXPECT_NEAR(bce_loss(0.0, 1), -std::log(kProbabilityClamp), 1e-9);
    EXPECT_TRUE(std::isfinite(bce_loss(1.0, 0)));
}

TEST(Bce, NonNegativeAndBatchMean) {
    Rng rng(2);
    std::vector<double> p;
    std::vector<int> labels;
    double sum = 0;
    for (int i = 0; i < 100; ++i) {
        p.push_back(uniform01(rng));
        labels.push_back(static_cast<int>(uniform_below(rng, 2)));
        const double q = std::clamp(p.back(), 1e-7, 1 - 1e-7);
        sum += labels.back() == 1 ? -std::log(q) : -std::log(1 - q);
        EXPECT_GE(bce_loss(p.back(), labels.back()), 0.0);
    }
    EXPECT_NEAR(bce_loss(p, labels), sum / 100, 1e-12);
}

TEST(Gradient, MatchesFiniteDifferencesOn100States) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = 1 + uniform_below(rng, 3);
        const std::size_t hidden = 1 + uniform_below(rng, 6);
        const auto state = random_state(rng, dim, hidden);
        const auto src = random_batch(rng, Domain::Source, 2 + uniform_below(rng, 6), dim, 0.0);
        const auto tgt = random_batch(rng, Domain::Target, 2 + uniform_below(rng, 6), dim, 1.5);
        const auto lg = discriminator_loss(state, src, tgt);
        EXPECT_NEAR(lg.loss, oracle::adversarial_loss(state.params, src, tgt), 1e-12);
        const auto analytic = lg.gradient.flatten();
        const auto numeric = oracle::numeric_gradient(state.params, src, tgt);
        ASSERT_EQ(analytic.size(), numeric.size());
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            ASSERT_LE(relative_error(analytic[i], numeric[i]), 1e-4)
                << "trial " << trial << " parameter " << i << ": " << analytic[i] << " vs " << numeric[i];
        }
    }
}

TEST(GradStep, ReversalContract) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto state = random_state(rng, 2, 4);
        const auto src = random_batch(rng, Domain::Source, 8, 2, 0.0);
        const auto tgt = random_batch(rng, Domain::Target, 8, 2, 2.0);
        // First pass: the gradient of the discriminator's loss.
        const auto grad = discriminator_loss(state, src, tgt).gradient.flatten();
        // Second pass: the update.
        const auto step = grad_step(state, src, tgt);
        const auto before = state.params.flatten();
        const auto after = step.state.params.flatten();
        const std::size_t na = state.params.aligner_count();
        for (std::size_t i = 0; i < before.size(); ++i) {
            const double delta = after[i] - before[i];
            const double expected = i < na ? state.lr * state.lambda * grad[i] : -state.lr * grad[i];
            EXPECT_NEAR(delta, expected, 1e-12 * std::max(1.0, std::abs(before[i])));
        }
        EXPECT_EQ(step.state.steps, state.steps + 1);
    }
}

TEST(GradStep, ZeroLambdaFreezesTheAligner) {
    Rng rng(5);
    auto state = random_state(rng, 2, 4);
    state.lambda = 0.0;
    const auto src = random_batch(rng, Domain::Source, 8, 2, 0.0);
    const auto tgt = random_batch(rng, Domain::Target, 8, 2, 2.0);
    const auto next = grad_step(state, src, tgt).state;
    EXPECT_EQ(next.params.aligner_weight, state.params.aligner_weight);
    EXPECT_EQ(next.params.aligner_bias, state.params.aligner_bias);
    EXPECT_NE(next.params.hidden_weight, state.params.hidden_weight);
}

TEST(GradStep, DivergenceCarriesLastFiniteState) {
    Rng rng(6);
    auto state = random_state(rng, 2, 4);
    state.lr = 1e308;
    const auto src = random_batch(rng, Domain::Source, 8, 2, 0.0);
    const auto tgt = random_batch(rng, Domain::Target, 8, 2, 2.0);
    // The first huge step may still land on finite (if absurd) weights; the
    // error must carry the input of whichever step blows up.
    for (int i = 0; i < 10; ++i) {
        try {
            state = grad_step(state, src, tgt).state;
        } catch (const DivergenceError& e) {
            EXPECT_EQ(e.last_finite_state(), state);
            EXPECT_TRUE(e.last_finite_state().params.all_finite());
            return;
        }
    }
    FAIL() << "expected DivergenceError";
}

TEST(AlignState, InitAndValidation) {
    const auto s = AlignState::init(2, 16, 9, 0.5, 0.1);
    EXPECT_EQ(s.params.aligner_weight, (std::vector<double>{1, 0, 0, 1}));
    EXPECT_EQ(s.params.count(), 4u + 2 + 32 + 16 + 16 + 1);
    EXPECT_EQ(s, AlignState::init(2, 16, 9, 0.5, 0.1));
    EXPECT_THROW(AlignState::init(2, 16, 9, -1.0, 0.1), InvalidArgument);
    EXPECT_THROW(AlignState::init(2, 16, 9, 1.0, 0.0), InvalidArgument);
}

TEST(Demo, IdenticalDistributionsStayIndistinguishable) {
    DemoConfig cfg;
    cfg.tgt_mean = cfg.src_mean;
    cfg.steps = 2000;
    const auto report = run_demo(cfg);
    EXPECT_GE(report.disc_acc_heldout, 0.4);
    EXPECT_LE(report.disc_acc_heldout, 0.6);
    EXPECT_LT(report.mmd_before, 0.01);
}

TEST(Demo, DeterministicGivenSeed) {
    DemoConfig cfg;
    cfg.steps = 300;
    const auto a = run_demo(cfg);
    const auto b = run_demo(cfg);
    EXPECT_EQ(a.loss_trace, b.loss_trace);
    EXPECT_EQ(a.final_state, b.final_state);
    EXPECT_EQ(demo_report_to_json(cfg, a).dump(), demo_report_to_json(cfg, b).dump());
    cfg.seed = 8;
    EXPECT_NE(run_demo(cfg).loss_trace, a.loss_trace);
}

TEST(Demo, RejectsZeroSteps) {
    DemoConfig cfg;
    cfg.steps = 0;
    EXPECT_THROW(run_demo(cfg), InvalidArgument);
}
