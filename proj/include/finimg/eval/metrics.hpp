#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include <json.hpp>

#include "finimg/eval/split.hpp"

namespace finimg::eval {

/// Positive class is 1 (defaulted or bankrupt).
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const Confusion&) const = default;
};

Confusion confusion(std::span<const int> predictions, std::span<const int> labels);

struct Metrics {
    Confusion counts;
    double loss = 0.0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    // Set when the matching denominator is zero; the value is then 0.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

Metrics compute_metrics(const Confusion& counts, double loss);

/// Harmonic mean; 0 when both are 0.
double f1_score(double precision, double recall);

struct ReportedRow {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Largest |f1_score(precision, recall) - f1| over the rows.
double f1_consistency(std::span<const ReportedRow> rows);

/// {seed, split_sizes, loss, accuracy, precision, recall, f1, confusion, flags}.
nlohmann::ordered_json metrics_report(const Metrics& m, const SplitPlan& split);

}  // namespace finimg::eval
