#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "finimg/cnn/model.hpp"

namespace finimg::cnn {

/// Images as concatenated H,W,C bytes with one label each.
struct Dataset {
    Shape shape{3, 24, 24};
    std::vector<std::uint8_t> pixels;
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::size_t image_bytes() const { return Tensor::sample_size(shape); }
    void add(std::span<const std::uint8_t> image, int label);
    Dataset subset(std::span<const std::size_t> indices) const;
    Tensor batch(std::span<const std::size_t> indices) const;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    int stopped_epoch = 0;
    int best_epoch = 0;
    double best_val_loss = 0.0;
};

nlohmann::json to_json(const TrainReport& r);

struct Evaluation {
    double loss = 0.0;
    double accuracy = 0.0;
};

std::vector<double> predict_proba(Model& model, const Dataset& data, std::size_t batch = 256);
Evaluation evaluate(Model& model, const Dataset& data);

/// Mini-batch Adam on `train` using model.config(). Statistics are full
/// passes at each epoch end. Training stops once validation loss has failed
/// to improve for `patience` consecutive epochs, and the parameters of the
/// best validation epoch are restored. Throws ContractError on an empty split.
TrainReport fit(Model& model, const Dataset& train, const Dataset& val);

}  // namespace finimg::cnn
