#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "finimg/cnn/layers.hpp"

namespace finimg::cnn {

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 32;
    int epochs = 30;
    int patience = 5;
    std::uint64_t seed = 20240517;
};

nlohmann::json to_json(const TrainConfig& c);
/// Missing keys keep their defaults. Throws DataError on bad values.
TrainConfig train_config_from_json(const nlohmann::json& j);

inline constexpr int kModelFormatVersion = 1;
inline constexpr double kProbabilityEpsilon = 1e-7;

/// A layer stack producing one logit per sample, followed by a sigmoid.
class Model {
public:
    explicit Model(Shape input = {3, 24, 24});

    /// conv 3x3x16, relu, pool, conv 3x3x32, relu, pool, flatten, dense 64,
    /// relu, dense 1.
    static Model standard(const TrainConfig& config = {});

    /// Throws ContractError when the layer cannot follow the current stack.
    void add(std::unique_ptr<Layer> layer);
    /// He-uniform weights, zero biases, drawn in layer order from the seed.
    void initialize(std::uint64_t seed);
    void zero_parameters();

    Shape input_shape() const { return input_; }
    std::size_t layer_count() const { return layers_.size(); }
    const Layer& layer(std::size_t i) const { return *layers_.at(i); }

    std::vector<double> predict_proba(const Tensor& x);
    /// Mean BCE of the batch; leaves the gradients of that mean in every
    /// Param::grad.
    double loss_and_gradients(const Tensor& x, std::span<const int> labels);

    std::vector<Param*> params();
    std::vector<std::vector<double>> snapshot();
    void restore(const std::vector<std::vector<double>>& values);

    TrainConfig& config() { return config_; }
    const TrainConfig& config() const { return config_; }

    nlohmann::json to_json() const;
    static Model from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static Model load(const std::filesystem::path& path);

private:
    Tensor logits(const Tensor& x);

    Shape input_;
    Shape output_;
    std::vector<std::unique_ptr<Layer>> layers_;
    TrainConfig config_;
};

/// Mean of -[y ln p + (1 - y) ln(1 - p)] with p clipped to [1e-7, 1 - 1e-7].
double bce_loss(std::span<const double> probabilities, std::span<const int> labels);

/// Label 1 iff p >= threshold.
std::vector<int> predict_labels(std::span<const double> probabilities, double threshold = 0.5);

/// Interleaved H,W,C bytes of `count` images to N,C,H,W values in [0, 1].
Tensor from_hwc_bytes(std::span<const std::uint8_t> bytes, int count, Shape shape);

}  // namespace finimg::cnn
