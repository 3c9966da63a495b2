#include "swellkit/adapt.hpp"

#include "swellkit/random.hpp"

#include <algorithm>
#include <cmath>

namespace swellkit {

namespace {

bool finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double sigmoid(double s) {
    if (s >= 0.0) {
        return 1.0 / (1.0 + std::exp(-s));
    }
    const double e = std::exp(s);
    return e / (1.0 + e);
}

void check_dims(const AlignParams& p, std::size_t d) {
    if (d != p.dim) {
        throw InvalidArgument("feature dimension " + std::to_string(d) + " does not match model dimension " +
                              std::to_string(p.dim));
    }
}

} // namespace

void FeatureBatch::validate() const {
    if (dim == 0 || values.empty() || values.size() % dim != 0) {
        throw InvalidArgument("feature batch must hold at least one vector of positive dimension");
    }
    if (!finite(values)) {
        throw InvalidArgument("feature batch has non-finite entries");
    }
}

AlignParams AlignParams::zeros(std::size_t dim, std::size_t hidden) {
    AlignParams p;
    p.dim = dim;
    p.hidden = hidden;
    p.aligner_weight.assign(dim * dim, 0.0);
    p.aligner_bias.assign(dim, 0.0);
    p.hidden_weight.assign(hidden * dim, 0.0);
    p.hidden_bias.assign(hidden, 0.0);
    p.output_weight.assign(hidden, 0.0);
    return p;
}

std::size_t AlignParams::count() const {
    return aligner_weight.size() + aligner_bias.size() + hidden_weight.size() + hidden_bias.size() +
           output_weight.size() + 1;
}

std::vector<double> AlignParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(count());
    for (const auto* v : {&aligner_weight, &aligner_bias, &hidden_weight, &hidden_bias, &output_weight}) {
        flat.insert(flat.end(), v->begin(), v->end());
    }
    flat.push_back(output_bias);
    return flat;
}

void AlignParams::assign(std::span<const double> flat) {
    if (flat.size() != count()) {
        throw InvalidArgument("parameter vector has the wrong length");
    }
    auto it = flat.begin();
    for (auto* v : {&aligner_weight, &aligner_bias, &hidden_weight, &hidden_bias, &output_weight}) {
        std::copy(it, it + static_cast<std::ptrdiff_t>(v->size()), v->begin());
        it += static_cast<std::ptrdiff_t>(v->size());
    }
    output_bias = *it;
}

bool AlignParams::all_finite() const {
    return finite(flatten());
}

AlignState AlignState::init(std::size_t dim, std::size_t hidden, std::uint64_t seed, double lambda, double lr) {
    AlignState s;
    s.params = AlignParams::zeros(dim, hidden);
    for (std::size_t i = 0; i < dim; ++i) {
        s.params.aligner_weight[i * dim + i] = 1.0;
    }
    Rng rng(seed);
    const double hidden_scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& w : s.params.hidden_weight) {
        w = hidden_scale * standard_normal(rng);
    }
    const double out_scale = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (auto& w : s.params.output_weight) {
        w = out_scale * standard_normal(rng);
    }
    s.lambda = lambda;
    s.lr = lr;
    s.seed = seed;
    s.validate();
    return s;
}

void AlignState::validate() const {
    if (params.dim == 0 || params.hidden == 0) {
        throw InvalidArgument("model dimension and hidden width must be positive");
    }
    if (!params.all_finite()) {
        throw InvalidArgument("model parameters must be finite");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("lambda must be finite and non-negative");
    }
    if (!(lr > 0.0) || !std::isfinite(lr)) {
        throw InvalidArgument("learning rate must be positive");
    }
}

std::vector<double> align(const AlignParams& p, std::span<const double> x) {
    check_dims(p, x.size());
    std::vector<double> z(p.dim);
    for (std::size_t r = 0; r < p.dim; ++r) {
        double acc = p.aligner_bias[r];
        for (std::size_t c = 0; c < p.dim; ++c) {
            acc += p.aligner_weight[r * p.dim + c] * x[c];
        }
        z[r] = acc;
    }
    return z;
}

namespace {

struct Forward {
    std::vector<double> z;
    std::vector<double> hidden; // tanh activations
    double p = 0.5;
};

Forward forward(const AlignParams& p, std::span<const double> x, Domain domain) {
    Forward f;
    if (domain == Domain::Target) {
        f.z = align(p, x);
    } else {
        check_dims(p, x.size());
        f.z.assign(x.begin(), x.end());
    }
    f.hidden.resize(p.hidden);
    double s = p.output_bias;
    for (std::size_t j = 0; j < p.hidden; ++j) {
        double a = p.hidden_bias[j];
        for (std::size_t c = 0; c < p.dim; ++c) {
            a += p.hidden_weight[j * p.dim + c] * f.z[c];
        }
        f.hidden[j] = std::tanh(a);
        s += p.output_weight[j] * f.hidden[j];
    }
    f.p = sigmoid(s);
    return f;
}

// Adds d(loss)/d(params) for one sample, given d(loss)/d(logit).
void backward(const AlignParams& p, std::span<const double> x, Domain domain, const Forward& f, double g_logit,
              AlignParams& grad) {
    grad.output_bias += g_logit;
    std::vector<double> g_z(p.dim, 0.0);
    for (std::size_t j = 0; j < p.hidden; ++j) {
        grad.output_weight[j] += g_logit * f.hidden[j];
        const double g_a = g_logit * p.output_weight[j] * (1.0 - f.hidden[j] * f.hidden[j]);
        grad.hidden_bias[j] += g_a;
        for (std::size_t c = 0; c < p.dim; ++c) {
            grad.hidden_weight[j * p.dim + c] += g_a * f.z[c];
            g_z[c] += g_a * p.hidden_weight[j * p.dim + c];
        }
    }
    if (domain == Domain::Target) {
        for (std::size_t r = 0; r < p.dim; ++r) {
            grad.aligner_bias[r] += g_z[r];
            for (std::size_t c = 0; c < p.dim; ++c) {
                grad.aligner_weight[r * p.dim + c] += g_z[r] * x[c];
            }
        }
    }
}

double clamp_probability(double p) {
    return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

} // namespace

double disc_forward(const AlignState& state, std::span<const double> x, Domain domain) {
    return forward(state.params, x, domain).p;
}

double bce_loss(double p, int label) {
    if (label != 0 && label != 1) {
        throw InvalidArgument("label must be 0 or 1");
    }
    const double q = clamp_probability(p);
    return label == 1 ? -std::log(q) : -std::log1p(-q);
}

double bce_loss(std::span<const double> p, std::span<const int> labels) {
    if (p.size() != labels.size() || p.empty()) {
        throw InvalidArgument("bce batch needs equally many probabilities and labels");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sum += bce_loss(p[i], labels[i]);
    }
    return sum / static_cast<double>(p.size());
}

LossGradient discriminator_loss(const AlignState& state, const FeatureBatch& src, const FeatureBatch& tgt) {
    src.validate();
    tgt.validate();
    check_dims(state.params, src.dim);
    check_dims(state.params, tgt.dim);

    LossGradient out;
    out.gradient = AlignParams::zeros(state.params.dim, state.params.hidden);
    const double n = static_cast<double>(src.size() + tgt.size());
    double loss = 0.0;
    auto accumulate = [&](const FeatureBatch& batch, Domain domain) {
        const int label = domain_label(domain);
        for (std::size_t i = 0; i < batch.size(); ++i) {
            const auto x = batch.row(i);
            const Forward f = forward(state.params, x, domain);
            loss += bce_loss(f.p, label);
            // d BCE / d logit = p - y, and zero where the clamp is active.
            const bool clamped = f.p < kProbabilityClamp || f.p > 1.0 - kProbabilityClamp;
            const double g_logit = clamped ? 0.0 : (f.p - label) / n;
            if (g_logit != 0.0) {
                backward(state.params, x, domain, f, g_logit, out.gradient);
            }
        }
    };
    accumulate(src, Domain::Source);
    accumulate(tgt, Domain::Target);
    out.loss = loss / n;
    return out;
}

StepResult grad_step(const AlignState& state, const FeatureBatch& src, const FeatureBatch& tgt) {
    state.validate();
    const LossGradient lg = discriminator_loss(state, src, tgt);
    if (!std::isfinite(lg.loss)) {
        throw DivergenceError("non-finite discriminator loss at step " + std::to_string(state.steps), state);
    }

    auto flat = state.params.flatten();
    const auto grad = lg.gradient.flatten();
    const std::size_t n_aligner = state.params.aligner_count();
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (i < n_aligner) {
            // Gradient reversal: the aligner follows -lambda * grad downhill.
            flat[i] -= state.lr * (-state.lambda * grad[i]);
        } else {
            flat[i] -= state.lr * grad[i];
        }
    }

    StepResult result{state, lg.loss};
    result.state.params.assign(flat);
    result.state.steps = state.steps + 1;
    if (!result.state.params.all_finite()) {
        throw DivergenceError("non-finite parameters after step " + std::to_string(state.steps), state);
    }
    return result;
}

double disc_accuracy(const AlignState& state, const FeatureBatch& src, const FeatureBatch& tgt) {
    src.validate();
    tgt.validate();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        correct += disc_forward(state, src.row(i), Domain::Source) >= 0.5 ? 1 : 0;
    }
    for (std::size_t i = 0; i < tgt.size(); ++i) {
        correct += disc_forward(state, tgt.row(i), Domain::Target) < 0.5 ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(src.size() + tgt.size());
}

} // namespace swellkit
