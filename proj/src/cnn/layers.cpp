#include "finimg/cnn/layers.hpp"

#include <cmath>
#include <limits>

#include "finimg/common/error.hpp"

namespace finimg::cnn {
namespace {

std::string shape_text(Shape s) {
    return std::to_string(s[0]) + "x" + std::to_string(s[1]) + "x" + std::to_string(s[2]);
}

void he_uniform(Param& w, int fan_in, Rng& rng) {
    const double limit = std::sqrt(6.0 / fan_in);
    for (double& x : w.value) x = rng.uniform(-limit, limit);
}

std::vector<double> read_array(const nlohmann::json& j, const char* key, std::size_t size) {
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != size)
        throw DataError(std::string("layer field '") + key + "' must hold " + std::to_string(size) + " values");
    return a.get<std::vector<double>>();
}

}  // namespace

nlohmann::json Layer::to_json() const { return {{"type", type()}}; }

Conv2D::Conv2D(int in_channels, int out_channels, int kernel)
    : in_(in_channels),
      out_(out_channels),
      k_(kernel),
      weights_(static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel),
      bias_(static_cast<std::size_t>(out_channels)) {
    if (in_ <= 0 || out_ <= 0 || k_ <= 0) throw ContractError("conv2d dimensions must be positive");
}

Shape Conv2D::output_shape(Shape in) const {
    if (in[0] != in_ || in[1] < k_ || in[2] < k_)
        throw ContractError("conv2d " + std::to_string(in_) + "->" + std::to_string(out_) + " k" +
                            std::to_string(k_) + " cannot take input " + shape_text(in));
    return {out_, in[1] - k_ + 1, in[2] - k_ + 1};
}

Tensor Conv2D::forward(const Tensor& x) {
    const Shape os = output_shape(x.shape);
    input_ = x;
    Tensor y(x.n, os);
    const int H = os[1], W = os[2];
    for (int b = 0; b < x.n; ++b)
        for (int o = 0; o < out_; ++o) {
            double* out = &y.at(b, o, 0, 0);
            std::fill(out, out + H * W, bias_.value[static_cast<std::size_t>(o)]);
            for (int c = 0; c < in_; ++c)
                for (int ky = 0; ky < k_; ++ky)
                    for (int kx = 0; kx < k_; ++kx) {
                        const double w = weights_.value[((static_cast<std::size_t>(o) * in_ + c) * k_ + ky) * k_ + kx];
                        for (int i = 0; i < H; ++i) {
                            const double* in = &x.at(b, c, i + ky, kx);
                            double* row = out + i * W;
                            for (int j = 0; j < W; ++j) row[j] += w * in[j];
                        }
                    }
        }
    return y;
}

Tensor Conv2D::backward(const Tensor& g) {
    const Tensor& x = input_;
    Tensor dx(x.n, x.shape);
    std::fill(weights_.grad.begin(), weights_.grad.end(), 0.0);
    std::fill(bias_.grad.begin(), bias_.grad.end(), 0.0);
    const int H = g.shape[1], W = g.shape[2];
    for (int b = 0; b < x.n; ++b)
        for (int o = 0; o < out_; ++o) {
            const double* go = &g.at(b, o, 0, 0);
            double bsum = 0.0;
            for (int i = 0; i < H * W; ++i) bsum += go[i];
            bias_.grad[static_cast<std::size_t>(o)] += bsum;
            for (int c = 0; c < in_; ++c)
                for (int ky = 0; ky < k_; ++ky)
                    for (int kx = 0; kx < k_; ++kx) {
                        const std::size_t wi = ((static_cast<std::size_t>(o) * in_ + c) * k_ + ky) * k_ + kx;
                        const double w = weights_.value[wi];
                        double acc = 0.0;
                        for (int i = 0; i < H; ++i) {
                            const double* in = &x.at(b, c, i + ky, kx);
                            double* din = &dx.at(b, c, i + ky, kx);
                            const double* grow = go + i * W;
                            for (int j = 0; j < W; ++j) {
                                acc += grow[j] * in[j];
                                din[j] += w * grow[j];
                            }
                        }
                        weights_.grad[wi] += acc;
                    }
        }
    return dx;
}

void Conv2D::initialize(Rng& rng) {
    he_uniform(weights_, in_ * k_ * k_, rng);
    std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
}

nlohmann::json Conv2D::to_json() const {
    return {{"type", type()},       {"in_channels", in_},       {"out_channels", out_},
            {"kernel", k_},         {"weights", weights_.value}, {"bias", bias_.value}};
}

Tensor Relu::forward(const Tensor& x) {
    output_ = x;
    for (double& v : output_.data) v = v > 0.0 ? v : 0.0;
    return output_;
}

Tensor Relu::backward(const Tensor& g) {
    Tensor dx = g;
    for (std::size_t i = 0; i < dx.data.size(); ++i)
        if (output_.data[i] <= 0.0) dx.data[i] = 0.0;
    return dx;
}

Shape MaxPool2D::output_shape(Shape in) const {
    if (in[1] < 2 || in[2] < 2) throw ContractError("maxpool2d cannot take input " + shape_text(in));
    return {in[0], in[1] / 2, in[2] / 2};
}

Tensor MaxPool2D::forward(const Tensor& x) {
    const Shape os = output_shape(x.shape);
    in_shape_ = x.shape;
    Tensor y(x.n, os);
    argmax_.assign(y.data.size(), 0);
    std::size_t k = 0;
    for (int b = 0; b < x.n; ++b)
        for (int c = 0; c < os[0]; ++c)
            for (int i = 0; i < os[1]; ++i)
                for (int j = 0; j < os[2]; ++j, ++k) {
                    double best = -std::numeric_limits<double>::infinity();
                    std::size_t where = 0;
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            const std::size_t idx =
                                ((static_cast<std::size_t>(b) * x.shape[0] + c) * x.shape[1] + 2 * i + dy) *
                                    x.shape[2] + 2 * j + dx;
                            if (x.data[idx] > best) {
                                best = x.data[idx];
                                where = idx;
                            }
                        }
                    y.data[k] = best;
                    argmax_[k] = where;
                }
    return y;
}

Tensor MaxPool2D::backward(const Tensor& g) {
    Tensor dx(g.n, in_shape_);
    for (std::size_t k = 0; k < g.data.size(); ++k) dx.data[argmax_[k]] += g.data[k];
    return dx;
}

Shape Flatten::output_shape(Shape in) const { return {in[0] * in[1] * in[2], 1, 1}; }

Tensor Flatten::forward(const Tensor& x) {
    in_shape_ = x.shape;
    Tensor y = x;
    y.shape = output_shape(x.shape);
    return y;
}

Tensor Flatten::backward(const Tensor& g) {
    Tensor dx = g;
    dx.shape = in_shape_;
    return dx;
}

Dense::Dense(int inputs, int outputs)
    : in_(inputs),
      out_(outputs),
      weights_(static_cast<std::size_t>(inputs) * outputs),
      bias_(static_cast<std::size_t>(outputs)) {
    if (in_ <= 0 || out_ <= 0) throw ContractError("dense dimensions must be positive");
}

Shape Dense::output_shape(Shape in) const {
    if (in[1] != 1 || in[2] != 1 || in[0] != in_)
        throw ContractError("dense " + std::to_string(in_) + "->" + std::to_string(out_) +
                            " cannot take input " + shape_text(in) + " (flatten first)");
    return {out_, 1, 1};
}

Tensor Dense::forward(const Tensor& x) {
    const Shape os = output_shape(x.shape);
    input_ = x;
    Tensor y(x.n, os);
    for (int b = 0; b < x.n; ++b) {
        const double* in = &x.data[static_cast<std::size_t>(b) * in_];
        for (int o = 0; o < out_; ++o) {
            const double* w = &weights_.value[static_cast<std::size_t>(o) * in_];
            double s = bias_.value[static_cast<std::size_t>(o)];
            for (int i = 0; i < in_; ++i) s += w[i] * in[i];
            y.data[static_cast<std::size_t>(b) * out_ + o] = s;
        }
    }
    return y;
}

Tensor Dense::backward(const Tensor& g) {
    Tensor dx(input_.n, input_.shape);
    std::fill(weights_.grad.begin(), weights_.grad.end(), 0.0);
    std::fill(bias_.grad.begin(), bias_.grad.end(), 0.0);
    for (int b = 0; b < input_.n; ++b) {
        const double* in = &input_.data[static_cast<std::size_t>(b) * in_];
        double* din = &dx.data[static_cast<std::size_t>(b) * in_];
        for (int o = 0; o < out_; ++o) {
            const double go = g.data[static_cast<std::size_t>(b) * out_ + o];
            bias_.grad[static_cast<std::size_t>(o)] += go;
            const double* w = &weights_.value[static_cast<std::size_t>(o) * in_];
            double* gw = &weights_.grad[static_cast<std::size_t>(o) * in_];
            for (int i = 0; i < in_; ++i) {
                gw[i] += go * in[i];
                din[i] += go * w[i];
            }
        }
    }
    return dx;
}

void Dense::initialize(Rng& rng) {
    he_uniform(weights_, in_, rng);
    std::fill(bias_.value.begin(), bias_.value.end(), 0.0);
}

nlohmann::json Dense::to_json() const {
    return {{"type", type()}, {"inputs", in_}, {"outputs", out_}, {"weights", weights_.value}, {"bias", bias_.value}};
}

std::unique_ptr<Layer> layer_from_json(const nlohmann::json& j) {
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "conv2d") {
            auto l = std::make_unique<Conv2D>(j.at("in_channels").get<int>(), j.at("out_channels").get<int>(),
                                              j.at("kernel").get<int>());
            auto p = l->params();
            p[0]->value = read_array(j, "weights", p[0]->value.size());
            p[1]->value = read_array(j, "bias", p[1]->value.size());
            return l;
        }
        if (type == "dense") {
            auto l = std::make_unique<Dense>(j.at("inputs").get<int>(), j.at("outputs").get<int>());
            auto p = l->params();
            p[0]->value = read_array(j, "weights", p[0]->value.size());
            p[1]->value = read_array(j, "bias", p[1]->value.size());
            return l;
        }
        if (type == "relu") return std::make_unique<Relu>();
        if (type == "maxpool2d") return std::make_unique<MaxPool2D>();
        if (type == "flatten") return std::make_unique<Flatten>();
        throw DataError("unknown layer type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("layer: ") + e.what());
    } catch (const ContractError& e) {
        throw DataError(std::string("layer: ") + e.what());
    }
}

}  // namespace finimg::cnn
