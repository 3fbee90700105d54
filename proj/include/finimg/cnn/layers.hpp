#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "finimg/common/rng.hpp"

namespace finimg::cnn {

/// Channels, height, width of one sample.
using Shape = std::array<int, 3>;

/// Batch-major N,C,H,W storage. Dense activations use H = W = 1.
struct Tensor {
    int n = 0;
    Shape shape{};
    std::vector<double> data;

    Tensor() = default;
    Tensor(int batch, Shape s) : n(batch), shape(s), data(static_cast<std::size_t>(batch) * sample_size(s)) {}

    static std::size_t sample_size(Shape s) {
        return static_cast<std::size_t>(s[0]) * static_cast<std::size_t>(s[1]) * static_cast<std::size_t>(s[2]);
    }
    std::size_t sample_size() const { return sample_size(shape); }
    double& at(int b, int c, int y, int x) {
        return data[((static_cast<std::size_t>(b) * shape[0] + c) * shape[1] + y) * shape[2] + x];
    }
    const double& at(int b, int c, int y, int x) const {
        return data[((static_cast<std::size_t>(b) * shape[0] + c) * shape[1] + y) * shape[2] + x];
    }
};

struct Param {
    std::vector<double> value;
    std::vector<double> grad;

    explicit Param(std::size_t size = 0) : value(size, 0.0), grad(size, 0.0) {}
};

class Layer {
public:
    virtual ~Layer() = default;

    virtual std::string type() const = 0;
    /// Throws ContractError when `in` cannot feed this layer.
    virtual Shape output_shape(Shape in) const = 0;
    /// Keeps whatever backward() needs from the most recent call.
    virtual Tensor forward(const Tensor& x) = 0;
    /// Overwrites parameter gradients with those of the last forward batch and
    /// returns the gradient with respect to that batch's input.
    virtual Tensor backward(const Tensor& grad_out) = 0;

    virtual std::vector<Param*> params() { return {}; }
    virtual void initialize(Rng&) {}
    /// Layer hyperparameters and parameter arrays.
    virtual nlohmann::json to_json() const;
};

/// 2-D convolution, stride 1, no padding.
class Conv2D : public Layer {
public:
    Conv2D(int in_channels, int out_channels, int kernel);

    std::string type() const override { return "conv2d"; }
    Shape output_shape(Shape in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&weights_, &bias_}; }
    void initialize(Rng& rng) override;
    nlohmann::json to_json() const override;

    int in_channels() const { return in_; }
    int out_channels() const { return out_; }
    int kernel() const { return k_; }

private:
    int in_, out_, k_;
    Param weights_;  // [out][in][k][k]
    Param bias_;
    Tensor input_;
};

class Relu : public Layer {
public:
    std::string type() const override { return "relu"; }
    Shape output_shape(Shape in) const override { return in; }
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    Tensor output_;
};

/// 2x2 window, stride 2; a trailing odd row or column is dropped.
class MaxPool2D : public Layer {
public:
    std::string type() const override { return "maxpool2d"; }
    Shape output_shape(Shape in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    Shape in_shape_{};
    std::vector<std::size_t> argmax_;
};

class Flatten : public Layer {
public:
    std::string type() const override { return "flatten"; }
    Shape output_shape(Shape in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;

private:
    Shape in_shape_{};
};

/// Fully connected over a flattened input.
class Dense : public Layer {
public:
    Dense(int inputs, int outputs);

    std::string type() const override { return "dense"; }
    Shape output_shape(Shape in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&weights_, &bias_}; }
    void initialize(Rng& rng) override;
    nlohmann::json to_json() const override;

    int inputs() const { return in_; }
    int outputs() const { return out_; }

private:
    int in_, out_;
    Param weights_;  // [out][in]
    Param bias_;
    Tensor input_;
};

/// Rebuilds a layer from Layer::to_json output. Throws DataError.
std::unique_ptr<Layer> layer_from_json(const nlohmann::json& j);

}  // namespace finimg::cnn
