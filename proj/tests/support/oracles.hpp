#pragma once

// Reference implementations the library is checked against. Each one is
// written the slow, obvious way and shares no code with src/.

#include "swellkit/adapt.hpp"
#include "swellkit/eval.hpp"
#include "swellkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace swellkit::oracle {

/// IoU of integer boxes by counting unit cells.
inline double iou_cells(const BBox& a, const BBox& b) {
    const auto inside = [](const BBox& r, int x, int y) {
        return x >= r.x && x < r.x + r.w && y >= r.y && y < r.y + r.h;
    };
    const int x0 = static_cast<int>(std::min(a.x, b.x));
    const int y0 = static_cast<int>(std::min(a.y, b.y));
    const int x1 = static_cast<int>(std::max(a.x + a.w, b.x + b.w));
    const int y1 = static_cast<int>(std::max(a.y + a.h, b.y + b.h));
    long both = 0;
    long either = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const bool ia = inside(a, x, y);
            const bool ib = inside(b, x, y);
            both += ia && ib;
            either += ia || ib;
        }
    }
    return either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
}

/// Tight box by scanning every pixel.
inline std::optional<BBox> bbox_scan(const BinaryMask& m) {
    std::optional<BBox> out;
    long x0 = -1, y0 = -1, x1 = -1, y1 = -1;
    for (std::uint32_t r = 0; r < m.height(); ++r) {
        for (std::uint32_t c = 0; c < m.width(); ++c) {
            if (!m.at(r, c)) {
                continue;
            }
            x0 = x0 < 0 ? c : std::min<long>(x0, c);
            y0 = y0 < 0 ? r : std::min<long>(y0, r);
            x1 = std::max<long>(x1, c);
            y1 = std::max<long>(y1, r);
        }
    }
    if (x1 >= 0) {
        out = BBox{double(x0), double(y0), double(x1 - x0 + 1), double(y1 - y0 + 1)};
    }
    return out;
}

/// Column-major run lengths built by walking the pixels one at a time.
inline std::vector<std::uint32_t> rle_walk(const BinaryMask& m) {
    std::vector<std::uint32_t> counts{0};
    bool current = false;
    for (std::uint32_t c = 0; c < m.width(); ++c) {
        for (std::uint32_t r = 0; r < m.height(); ++r) {
            if (m.at(r, c) != current) {
                counts.push_back(0);
                current = !current;
            }
            ++counts.back();
        }
    }
    return counts;
}

inline double box_iou(const BBox& a, const BBox& b) {
    const double iw = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double ih = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = iw * ih;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0 ? inter / uni : 0.0;
}

inline double centre_error(const BBox& a, const BBox& b) {
    const double dx = (a.x + a.w / 2) - (b.x + b.w / 2);
    const double dy = (a.y + a.h / 2) - (b.y + b.h / 2);
    return std::sqrt(dx * dx + dy * dy);
}

/// Fraction of gt-present frames passing `hit`; a missing prediction never passes.
template <typename Hit>
double frame_fraction(const Track& gt, const Track& pred, Hit hit) {
    int passed = 0;
    int total = 0;
    for (std::size_t f = 0; f < gt.size(); ++f) {
        if (!gt[f]) {
            continue;
        }
        ++total;
        if (pred[f] && hit(*gt[f], *pred[f])) {
            ++passed;
        }
    }
    return static_cast<double>(passed) / total;
}

inline double success_at(const Track& gt, const Track& pred, double t) {
    return frame_fraction(gt, pred, [t](const BBox& g, const BBox& p) { return box_iou(g, p) > t; });
}

inline double precision_at(const Track& gt, const Track& pred, double px) {
    return frame_fraction(gt, pred, [px](const BBox& g, const BBox& p) { return centre_error(g, p) <= px; });
}

inline double norm_precision_at(const Track& gt, const Track& pred, double t) {
    return frame_fraction(gt, pred, [t](const BBox& g, const BBox& p) {
        const double dx = ((p.x + p.w / 2) - (g.x + g.w / 2)) / g.w;
        const double dy = ((p.y + p.h / 2) - (g.y + g.h / 2)) / g.h;
        return std::sqrt(dx * dx + dy * dy) <= t;
    });
}

/// AUC as the mean success over the thresholds 0, 0.02, ..., 1.
inline double auc(const Track& gt, const Track& pred) {
    double sum = 0;
    for (int i = 0; i <= 50; ++i) {
        sum += success_at(gt, pred, i / 50.0);
    }
    return sum / 51;
}

inline double p_norm(const Track& gt, const Track& pred) {
    double sum = 0;
    for (int i = 0; i <= 50; ++i) {
        sum += norm_precision_at(gt, pred, i / 100.0);
    }
    return sum / 51;
}

/// Mean BCE of the discriminator over both batches, evaluated directly from the formula.
inline double adversarial_loss(const AlignParams& p, const FeatureBatch& src, const FeatureBatch& tgt) {
    const auto prob = [&p](std::vector<double> z) {
        double logit = p.output_bias;
        for (std::size_t j = 0; j < p.hidden; ++j) {
            double a = p.hidden_bias[j];
            for (std::size_t k = 0; k < p.dim; ++k) {
                a += p.hidden_weight[j * p.dim + k] * z[k];
            }
            logit += p.output_weight[j] * std::tanh(a);
        }
        const double q = 1.0 / (1.0 + std::exp(-logit));
        return std::clamp(q, 1e-7, 1 - 1e-7);
    };
    double sum = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const auto r = src.row(i);
        sum += -std::log(prob({r.begin(), r.end()}));
    }
    for (std::size_t i = 0; i < tgt.size(); ++i) {
        const auto r = tgt.row(i);
        std::vector<double> z(p.dim);
        for (std::size_t a = 0; a < p.dim; ++a) {
            z[a] = p.aligner_bias[a];
            for (std::size_t b = 0; b < p.dim; ++b) {
                z[a] += p.aligner_weight[a * p.dim + b] * r[b];
            }
        }
        sum += -std::log(1 - prob(z));
    }
    return sum / static_cast<double>(src.size() + tgt.size());
}

/// Central finite differences of adversarial_loss in every flattened parameter.
inline std::vector<double> numeric_gradient(const AlignParams& params, const FeatureBatch& src,
                                            const FeatureBatch& tgt, double eps = 1e-5) {
    auto flat = params.flatten();
    std::vector<double> grad(flat.size());
    AlignParams probe = params;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const double keep = flat[i];
        flat[i] = keep + eps;
        probe.assign(flat);
        const double up = adversarial_loss(probe, src, tgt);
        flat[i] = keep - eps;
        probe.assign(flat);
        const double down = adversarial_loss(probe, src, tgt);
        flat[i] = keep;
        grad[i] = (up - down) / (2 * eps);
    }
    return grad;
}

/// Unbiased squared MMD with a Gaussian kernel, written out as three double sums.
inline double mmd2_unbiased(const FeatureBatch& a, const FeatureBatch& b, double bw) {
    const auto k = [bw](std::span<const double> x, std::span<const double> y) {
        double d2 = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            d2 += (x[i] - y[i]) * (x[i] - y[i]);
        }
        return std::exp(-d2 / (2 * bw * bw));
    };
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    double xx = 0, yy = 0, xy = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (i != j) {
                xx += k(a.row(i), a.row(j));
            }
        }
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (i != j) {
                yy += k(b.row(i), b.row(j));
            }
        }
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            xy += k(a.row(i), b.row(j));
        }
    }
    return xx / (n * (n - 1)) + yy / (m * (m - 1)) - 2 * xy / (n * m);
}

/// Mean luma of an RGB buffer from the floating-point Rec.601 weights.
inline double mean_luma(std::span<const std::uint8_t> rgb) {
    double sum = 0;
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
        sum += 0.299 * rgb[i] + 0.587 * rgb[i + 1] + 0.114 * rgb[i + 2];
    }
    return sum / static_cast<double>(rgb.size() / 3);
}

} // namespace swellkit::oracle
