#include "finimg/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "finimg/common/error.hpp"

namespace finimg::eval {

Confusion confusion(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size())
        throw ContractError("confusion: " + std::to_string(predictions.size()) + " predictions for " +
                            std::to_string(labels.size()) + " labels");
    Confusion c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int p = predictions[i], y = labels[i];
        if ((p != 0 && p != 1) || (y != 0 && y != 1)) throw ContractError("confusion: values must be 0 or 1");
        if (p && y) ++c.tp;
        else if (p) ++c.fp;
        else if (y) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double f1_score(double precision, double recall) {
    const double s = precision + recall;
    return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

Metrics compute_metrics(const Confusion& counts, double loss) {
    if (counts.total() == 0) throw ContractError("compute_metrics: no samples");
    Metrics m;
    m.counts = counts;
    m.loss = loss;
    m.accuracy = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
    if (counts.tp + counts.fp > 0)
        m.precision = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
    else
        m.precision_undefined = true;
    if (counts.tp + counts.fn > 0)
        m.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    else
        m.recall_undefined = true;
    if (m.precision + m.recall > 0.0 && !m.precision_undefined && !m.recall_undefined)
        m.f1 = f1_score(m.precision, m.recall);
    else
        m.f1_undefined = true;
    return m;
}

double f1_consistency(std::span<const ReportedRow> rows) {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::fabs(f1_score(r.precision, r.recall) - r.f1));
    return worst;
}

nlohmann::ordered_json metrics_report(const Metrics& m, const SplitPlan& split) {
    nlohmann::ordered_json j;
    j["seed"] = split.seed;
    j["split_sizes"] = {{"train", split.train.size()}, {"val", split.val.size()}, {"test", split.test.size()}};
    j["loss"] = m.loss;
    j["accuracy"] = m.accuracy;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    j["confusion"] = {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn}};
    j["flags"] = {{"precision_undefined", m.precision_undefined},
                  {"recall_undefined", m.recall_undefined},
                  {"f1_undefined", m.f1_undefined}};
    return j;
}

}  // namespace finimg::eval
