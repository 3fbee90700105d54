#pragma once

// Central finite differences against Model::loss_and_gradients.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "finimg/cnn/layers.hpp"
#include "finimg/cnn/model.hpp"
#include "finimg/common/rng.hpp"

namespace finimg::testing {

// conv 3x3x2, pool, dense 4, dense 1.
inline cnn::Model tiny_model(std::uint64_t seed) {
    cnn::Model m({3, 24, 24});
    m.add(std::make_unique<cnn::Conv2D>(3, 2, 3));
    m.add(std::make_unique<cnn::MaxPool2D>());
    m.add(std::make_unique<cnn::Flatten>());
    m.add(std::make_unique<cnn::Dense>(2 * 11 * 11, 4));
    m.add(std::make_unique<cnn::Dense>(4, 1));
    m.initialize(seed);
    return m;
}

// The same with a ReLU after the convolution and after the hidden dense layer.
inline cnn::Model tiny_relu_model(std::uint64_t seed) {
    cnn::Model m({3, 24, 24});
    m.add(std::make_unique<cnn::Conv2D>(3, 2, 3));
    m.add(std::make_unique<cnn::Relu>());
    m.add(std::make_unique<cnn::MaxPool2D>());
    m.add(std::make_unique<cnn::Flatten>());
    m.add(std::make_unique<cnn::Dense>(2 * 11 * 11, 4));
    m.add(std::make_unique<cnn::Relu>());
    m.add(std::make_unique<cnn::Dense>(4, 1));
    m.initialize(seed);
    return m;
}

inline cnn::Tensor random_images(int n, std::uint64_t seed) {
    cnn::Tensor t(n, {3, 24, 24});
    Rng rng(seed);
    for (double& v : t.data) v = rng.uniform();
    return t;
}

namespace detail {

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

// Largest row sum of |w| for a weight matrix stored [rows][cols].
inline double max_row_l1(const std::vector<double>& w, std::size_t rows) {
    const std::size_t cols = w.size() / rows;
    double m = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += std::fabs(w[r * cols + c]);
        m = std::max(m, s);
    }
    return m;
}

}  // namespace detail

/// True when no single-parameter step of +-h can move a ReLU input across
/// zero or change a max-pool winner. Central differences are only a
/// derivative oracle away from such kinks. `bound` tracks the largest change
/// any one step can cause in the current activations.
inline bool smooth_within(const cnn::Model& model, const cnn::Tensor& x, double h) {
    cnn::Tensor a = x;
    double bound = 0.0;
    for (std::size_t i = 0; i < model.layer_count(); ++i) {
        auto layer = cnn::layer_from_json(model.layer(i).to_json());
        const std::string type = layer->type();
        if (type == "relu") {
            for (double z : a.data)
                if (std::fabs(z) <= 2.0 * bound) return false;
        } else if (type == "maxpool2d") {
            const int c = a.shape[0], hh = a.shape[1], ww = a.shape[2];
            for (int n = 0; n < a.n; ++n)
                for (int ch = 0; ch < c; ++ch)
                    for (int r = 0; r + 1 < hh; r += 2)
                        for (int col = 0; col + 1 < ww; col += 2) {
                            double v[4] = {a.at(n, ch, r, col), a.at(n, ch, r, col + 1), a.at(n, ch, r + 1, col),
                                           a.at(n, ch, r + 1, col + 1)};
                            std::sort(v, v + 4);
                            if (v[3] == 0.0 && v[2] == 0.0) continue;  // tied zeros behind a ReLU
                            if (v[3] - v[2] <= 2.0 * bound) return false;
                        }
        }
        const double step = h * std::max(detail::max_abs(a.data), 1.0);
        auto params = layer->params();
        if (!params.empty()) {
            const std::size_t rows = params[1]->value.size();
            bound = std::max(step, bound * detail::max_row_l1(params[0]->value, rows));
        }
        a = layer->forward(a);
    }
    return true;
}

/// Seeded random images, redrawn from the same stream until the model is
/// smooth within the +-h stencil. `draws` receives the number of draws.
inline cnn::Tensor smooth_images(const cnn::Model& model, int n, std::uint64_t seed, double h, int* draws = nullptr) {
    for (int k = 0; k < 10000; ++k) {
        auto x = random_images(n, mix_seed(seed, static_cast<std::uint64_t>(k)));
        if (smooth_within(model, x, h)) {
            if (draws) *draws = k + 1;
            return x;
        }
    }
    throw std::runtime_error("no smooth image draw found");
}

struct GradientCheck {
    double max_relative_error = 0.0;
    std::size_t parameters = 0;
};

/// Relative error |a - n| / max(|a|, |n|, floor); the floor keeps parameters
/// whose true gradient is zero from dividing rounding noise by zero.
inline GradientCheck check_gradients(cnn::Model& m, const cnn::Tensor& x, const std::vector<int>& y,
                                     double h = 1e-4, double floor = 1e-7) {
    m.loss_and_gradients(x, y);
    std::vector<std::vector<double>> analytic;
    for (auto* p : m.params()) analytic.push_back(p->grad);
    GradientCheck out;
    auto params = m.params();
    for (std::size_t k = 0; k < params.size(); ++k) {
        for (std::size_t i = 0; i < params[k]->value.size(); ++i) {
            const double saved = params[k]->value[i];
            params[k]->value[i] = saved + h;
            const double up = cnn::bce_loss(m.predict_proba(x), y);
            params[k]->value[i] = saved - h;
            const double down = cnn::bce_loss(m.predict_proba(x), y);
            params[k]->value[i] = saved;
            const double numeric = (up - down) / (2 * h);
            const double a = analytic[k][i];
            const double rel = std::fabs(a - numeric) / std::max({std::fabs(a), std::fabs(numeric), floor});
            out.max_relative_error = std::max(out.max_relative_error, rel);
            ++out.parameters;
        }
    }
    return out;
}

}  // namespace finimg::testing
