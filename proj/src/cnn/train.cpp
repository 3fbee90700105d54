#include "finimg/cnn/train.hpp"

#include <cmath>
#include <numeric>

#include "finimg/common/error.hpp"

namespace finimg::cnn {

void Dataset::add(std::span<const std::uint8_t> image, int label) {
    if (image.size() != image_bytes()) throw ContractError("image size does not match the dataset shape");
    if (label != 0 && label != 1) throw ContractError("labels must be 0 or 1");
    pixels.insert(pixels.end(), image.begin(), image.end());
    labels.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.shape = shape;
    for (std::size_t i : indices)
        out.add(std::span(pixels).subspan(i * image_bytes(), image_bytes()), labels.at(i));
    return out;
}

Tensor Dataset::batch(std::span<const std::size_t> indices) const {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(indices.size() * image_bytes());
    for (std::size_t i : indices) {
        const auto first = pixels.begin() + static_cast<std::ptrdiff_t>(i * image_bytes());
        bytes.insert(bytes.end(), first, first + static_cast<std::ptrdiff_t>(image_bytes()));
    }
    return from_hwc_bytes(bytes, static_cast<int>(indices.size()), shape);
}

nlohmann::json to_json(const TrainReport& r) {
    nlohmann::json epochs = nlohmann::json::array();
    for (const auto& e : r.epochs)
        epochs.push_back({{"epoch", e.epoch},
                          {"train_loss", e.train_loss},
                          {"train_accuracy", e.train_accuracy},
                          {"val_loss", e.val_loss},
                          {"val_accuracy", e.val_accuracy}});
    return {{"epochs", epochs},
            {"stopped_epoch", r.stopped_epoch},
            {"best_epoch", r.best_epoch},
            {"best_val_loss", r.best_val_loss}};
}

std::vector<double> predict_proba(Model& model, const Dataset& data, std::size_t batch) {
    std::vector<double> out;
    out.reserve(data.size());
    std::vector<std::size_t> idx;
    for (std::size_t start = 0; start < data.size(); start += batch) {
        idx.resize(std::min(batch, data.size() - start));
        std::iota(idx.begin(), idx.end(), start);
        const auto p = model.predict_proba(data.batch(idx));
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

Evaluation evaluate(Model& model, const Dataset& data) {
    if (data.size() == 0) throw ContractError("cannot evaluate an empty dataset");
    const auto p = predict_proba(model, data);
    const auto y = predict_labels(p);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hits += y[i] == data.labels[i];
    return {bce_loss(p, data.labels), static_cast<double>(hits) / static_cast<double>(data.size())};
}

namespace {

class Adam {
public:
    Adam(std::vector<Param*> params, double lr) : params_(std::move(params)), lr_(lr) {
        for (Param* p : params_) {
            m_.emplace_back(p->value.size(), 0.0);
            v_.emplace_back(p->value.size(), 0.0);
        }
    }

    void step() {
        ++t_;
        const double c1 = 1.0 - std::pow(kBeta1, t_);
        const double c2 = 1.0 - std::pow(kBeta2, t_);
        for (std::size_t k = 0; k < params_.size(); ++k) {
            Param& p = *params_[k];
            for (std::size_t i = 0; i < p.value.size(); ++i) {
                const double g = p.grad[i];
                m_[k][i] = kBeta1 * m_[k][i] + (1.0 - kBeta1) * g;
                v_[k][i] = kBeta2 * v_[k][i] + (1.0 - kBeta2) * g * g;
                p.value[i] -= lr_ * (m_[k][i] / c1) / (std::sqrt(v_[k][i] / c2) + kEpsilon);
            }
        }
    }

private:
    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEpsilon = 1e-8;

    std::vector<Param*> params_;
    double lr_;
    int t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

}  // namespace

TrainReport fit(Model& model, const Dataset& train, const Dataset& val) {
    if (train.size() == 0) throw ContractError("training split is empty");
    if (val.size() == 0) throw ContractError("validation split is empty");
    const TrainConfig& cfg = model.config();
    Adam adam(model.params(), cfg.learning_rate);
    TrainReport report;
    auto best = model.snapshot();
    report.best_val_loss = INFINITY;
    int wait = 0;

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    const auto batch_size = static_cast<std::size_t>(cfg.batch_size);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const auto idx = std::span(order).subspan(start, std::min(batch_size, order.size() - start));
            std::vector<int> labels;
            for (std::size_t i : idx) labels.push_back(train.labels[i]);
            model.loss_and_gradients(train.batch(idx), labels);
            adam.step();
        }
        const Evaluation tr = evaluate(model, train);
        const Evaluation va = evaluate(model, val);
        report.epochs.push_back({epoch, tr.loss, tr.accuracy, va.loss, va.accuracy});
        report.stopped_epoch = epoch;
        if (va.loss < report.best_val_loss) {
            report.best_val_loss = va.loss;
            report.best_epoch = epoch;
            best = model.snapshot();
            wait = 0;
        } else if (++wait >= cfg.patience) {
            break;
        }
    }
    model.restore(best);
    return report;
}

}  // namespace finimg::cnn
