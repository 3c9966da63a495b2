#pragma once

// Desk-scale adversarial day/night feature alignment.
//
// Target (night) features pass through an affine aligner z = A x + b; source
// (day) features are used as they are. A one-hidden-layer discriminator
//   p = sigmoid(w2 . tanh(W1 z + b1) + b2)
// estimates the probability that z came from the source domain. One training
// step descends the discriminator's binary cross-entropy in its own weights and,
// through gradient reversal, ascends it in the aligner's weights scaled by lambda.

#include "swellkit/errors.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace swellkit {

enum class Domain { Source, Target };

/// n feature vectors of dimension dim, row-major.
struct FeatureBatch {
    Domain domain = Domain::Source;
    std::size_t dim = 0;
    std::vector<double> values;

    std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }

    /// Throws InvalidArgument unless non-empty, rectangular and finite.
    void validate() const;
};

/// Trainable weights. Also used to hold a gradient of the same shape.
struct AlignParams {
    std::size_t dim = 0;
    std::size_t hidden = 0;
    std::vector<double> aligner_weight; // dim x dim, row-major
    std::vector<double> aligner_bias;   // dim
    std::vector<double> hidden_weight;  // hidden x dim, row-major
    std::vector<double> hidden_bias;    // hidden
    std::vector<double> output_weight;  // hidden
    double output_bias = 0.0;

    static AlignParams zeros(std::size_t dim, std::size_t hidden);

    std::size_t count() const;
    /// Aligner weights first, then discriminator weights, in declaration order.
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);
    std::size_t aligner_count() const { return dim * dim + dim; }
    bool all_finite() const;

    friend bool operator==(const AlignParams&, const AlignParams&) = default;
};

struct AlignState {
    AlignParams params;
    double lambda = 1.0; // reversal strength
    double lr = 0.05;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;

    /// Identity aligner; discriminator weights ~ N(0, 1/fan_in) from the seed, zero biases.
    static AlignState init(std::size_t dim, std::size_t hidden, std::uint64_t seed, double lambda, double lr);

    void validate() const;

    friend bool operator==(const AlignState&, const AlignState&) = default;
};

class DivergenceError : public Error {
  public:
    DivergenceError(const std::string& what, AlignState last_finite)
        : Error(what), last_finite_(std::move(last_finite)) {}

    const AlignState& last_finite_state() const { return last_finite_; }

  private:
    AlignState last_finite_;
};

/// Applies the aligner to a target-domain vector.
std::vector<double> align(const AlignParams& params, std::span<const double> x);

/// Discriminator output for x, which is aligned first when it is a target feature.
double disc_forward(const AlignState& state, std::span<const double> x, Domain domain);

inline constexpr double kProbabilityClamp = 1e-7;

/// Binary cross-entropy with p clamped to [1e-7, 1 - 1e-7].
double bce_loss(double p, int label);
double bce_loss(std::span<const double> p, std::span<const int> labels);

/// Label convention: source = 1, target = 0.
inline int domain_label(Domain d) { return d == Domain::Source ? 1 : 0; }

struct LossGradient {
    double loss = 0.0;
    AlignParams gradient; // d loss / d params, all parameters
};

/// Mean BCE over both batches and its analytic gradient (backpropagation).
LossGradient discriminator_loss(const AlignState& state, const FeatureBatch& src, const FeatureBatch& tgt);

struct StepResult {
    AlignState state;
    double loss = 0.0; // loss before the update
};

/// One simultaneous update: discriminator -= lr * grad, aligner += lr * lambda * grad.
/// Throws DivergenceError, carrying the input state, if the loss or an updated weight is not finite.
StepResult grad_step(const AlignState& state, const FeatureBatch& src, const FeatureBatch& tgt);

/// Fraction of samples classified into their own domain (p >= 0.5 means source).
double disc_accuracy(const AlignState& state, const FeatureBatch& src, const FeatureBatch& tgt);

} // namespace swellkit
