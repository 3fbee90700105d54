#include "finimg/cnn/model.hpp"

#include <algorithm>
#include <cmath>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::cnn {

nlohmann::json to_json(const TrainConfig& c) {
    return {{"learning_rate", c.learning_rate},
            {"batch_size", c.batch_size},
            {"epochs", c.epochs},
            {"patience", c.patience},
            {"seed", c.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    try {
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.batch_size = j.value("batch_size", c.batch_size);
        c.epochs = j.value("epochs", c.epochs);
        c.patience = j.value("patience", c.patience);
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("training config: ") + e.what());
    }
    if (!(c.learning_rate > 0.0)) throw DataError("training config: learning_rate must be positive");
    if (c.batch_size <= 0) throw DataError("training config: batch_size must be positive");
    if (c.epochs <= 0) throw DataError("training config: epochs must be positive");
    if (c.patience < 0) throw DataError("training config: patience must be non-negative");
    return c;
}

Model::Model(Shape input) : input_(input), output_(input) {}

Model Model::standard(const TrainConfig& config) {
    Model m({3, 24, 24});
    m.add(std::make_unique<Conv2D>(3, 16, 3));
    m.add(std::make_unique<Relu>());
    m.add(std::make_unique<MaxPool2D>());
    m.add(std::make_unique<Conv2D>(16, 32, 3));
    m.add(std::make_unique<Relu>());
    m.add(std::make_unique<MaxPool2D>());
    m.add(std::make_unique<Flatten>());
    m.add(std::make_unique<Dense>(32 * 4 * 4, 64));
    m.add(std::make_unique<Relu>());
    m.add(std::make_unique<Dense>(64, 1));
    m.config_ = config;
    m.initialize(config.seed);
    return m;
}

void Model::add(std::unique_ptr<Layer> layer) {
    output_ = layer->output_shape(output_);
    layers_.push_back(std::move(layer));
}

void Model::initialize(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x1417));
    for (auto& l : layers_) l->initialize(rng);
}

void Model::zero_parameters() {
    for (Param* p : params()) std::fill(p->value.begin(), p->value.end(), 0.0);
}

std::vector<Param*> Model::params() {
    std::vector<Param*> out;
    for (auto& l : layers_)
        for (Param* p : l->params()) out.push_back(p);
    return out;
}

std::vector<std::vector<double>> Model::snapshot() {
    std::vector<std::vector<double>> out;
    for (Param* p : params()) out.push_back(p->value);
    return out;
}

void Model::restore(const std::vector<std::vector<double>>& values) {
    auto ps = params();
    if (ps.size() != values.size()) throw ContractError("snapshot does not match the model");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i]->value.size() != values[i].size()) throw ContractError("snapshot does not match the model");
        ps[i]->value = values[i];
    }
}

Tensor Model::logits(const Tensor& x) {
    if (x.shape != input_)
        throw ContractError("model expects input " + std::to_string(input_[0]) + "x" + std::to_string(input_[1]) +
                            "x" + std::to_string(input_[2]));
    if (output_ != Shape{1, 1, 1}) throw ContractError("model must end in a single output unit");
    Tensor t = x;
    for (auto& l : layers_) t = l->forward(t);
    return t;
}

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

std::vector<double> Model::predict_proba(const Tensor& x) {
    const Tensor z = logits(x);
    std::vector<double> p(z.data.size());
    std::transform(z.data.begin(), z.data.end(), p.begin(), sigmoid);
    return p;
}

double Model::loss_and_gradients(const Tensor& x, std::span<const int> labels) {
    if (labels.size() != static_cast<std::size_t>(x.n)) throw ContractError("one label per sample required");
    const Tensor z = logits(x);
    std::vector<double> p(z.data.size());
    std::transform(z.data.begin(), z.data.end(), p.begin(), sigmoid);
    // Gradient of the unclipped loss with respect to the logit. It differs
    // from the clipped one only where |z| > 16, where the clip would freeze
    // confidently wrong samples.
    Tensor g(x.n, {1, 1, 1});
    for (std::size_t i = 0; i < p.size(); ++i) g.data[i] = (p[i] - labels[i]) / x.n;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return bce_loss(p, labels);
}

nlohmann::json Model::to_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& l : layers_) layers.push_back(l->to_json());
    return {{"format_version", kModelFormatVersion},
            {"input_shape", input_},
            {"train_config", cnn::to_json(config_)},
            {"layers", layers}};
}

Model Model::from_json(const nlohmann::json& j) {
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw DataError("unsupported model format_version " + std::to_string(version));
        Model m(j.at("input_shape").get<Shape>());
        for (const auto& l : j.at("layers")) {
            try {
                m.add(layer_from_json(l));
            } catch (const ContractError& e) {
                throw DataError(std::string("model layers do not chain: ") + e.what());
            }
        }
        m.config_ = train_config_from_json(j.value("train_config", nlohmann::json::object()));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model: ") + e.what());
    }
}

void Model::save(const std::filesystem::path& path) const { files::write_text(path, to_json().dump() + "\n"); }

Model Model::load(const std::filesystem::path& path) {
    try {
        return from_json(files::read_json(path));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

double bce_loss(std::span<const double> probabilities, std::span<const int> labels) {
    if (probabilities.size() != labels.size()) throw ContractError("bce_loss: size mismatch");
    if (probabilities.empty()) throw ContractError("bce_loss: empty batch");
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double p = std::clamp(probabilities[i], kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
        sum -= labels[i] ? std::log(p) : std::log(1.0 - p);
    }
    return sum / static_cast<double>(labels.size());
}

std::vector<int> predict_labels(std::span<const double> probabilities, double threshold) {
    std::vector<int> out(probabilities.size());
    std::transform(probabilities.begin(), probabilities.end(), out.begin(),
                   [&](double p) { return p >= threshold ? 1 : 0; });
    return out;
}

Tensor from_hwc_bytes(std::span<const std::uint8_t> bytes, int count, Shape shape) {
    const std::size_t per = Tensor::sample_size(shape);
    if (count < 0 || bytes.size() != per * static_cast<std::size_t>(count))
        throw ContractError("image bytes do not match the batch shape");
    Tensor t(count, shape);
    const int C = shape[0], H = shape[1], W = shape[2];
    for (int b = 0; b < count; ++b)
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                for (int c = 0; c < C; ++c)
                    t.at(b, c, y, x) = bytes[b * per + (static_cast<std::size_t>(y) * W + x) * C + c] / 255.0;
    return t;
}

}  // namespace finimg::cnn
