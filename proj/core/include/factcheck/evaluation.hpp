#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "factcheck/dataset.hpp"
#include "factcheck/model.hpp"

namespace factcheck {

// Confusion matrix (rows = gold, cols = predicted) and the macro-averaged
// summary statistics. Per-class scores with an empty denominator count as 0.
struct Metrics {
    std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
    double precision = 0.0;  // macro
    double recall = 0.0;     // macro
    double f1 = 0.0;         // macro
    double accuracy = 0.0;
    std::array<std::size_t, kNumLabels> per_class_true{};  // confusion diagonal
    std::size_t total = 0;
};

Metrics metrics_from_confusion(
    const std::array<std::array<std::size_t, kNumLabels>, kNumLabels>& confusion);
Metrics metrics_from_pairs(std::span<const Label> gold, std::span<const Label> predicted);

// Runs predict over every example. Dataset must be non-empty.
Metrics evaluate(const Model& model, const LabeledDataset& dataset, const KnowledgeGraph& kg,
                 const StopwordList& stopwords);

struct WilcoxonResult {
    std::size_t n_effective = 0;  // pairs left after dropping zero differences
    double w_plus = 0.0;
    double w_minus = 0.0;
    double w_statistic = 0.0;  // min(w_plus, w_minus)
    double p_value = 1.0;      // two-sided
    bool exact = true;         // enumeration (n <= 20) vs normal approximation
};

// Paired signed-rank test on d_i = x_i - y_i. Zero differences are dropped;
// |d| is ranked ascending with average ranks for ties. Exact two-sided p by
// enumerating all 2^n sign assignments when n_effective <= 20, otherwise a
// tie-corrected normal approximation with continuity correction 0.5. All
// differences zero gives the degenerate result (n_effective 0, W 0, p 1).
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs);

struct ComparisonResult {
    Metrics baseline;
    Metrics proposed;
    WilcoxonResult wilcoxon;
    std::vector<double> baseline_block_accuracy;
    std::vector<double> proposed_block_accuracy;
    std::size_t block_size = 0;
};

// Partitions the test set in order into blocks of block_size (the last block
// may be short), computes each model's per-block accuracy, and applies the
// signed-rank test to the paired (proposed, baseline) block accuracies.
ComparisonResult compare_models(const Model& baseline, const Model& proposed,
                                const LabeledDataset& test_set, const KnowledgeGraph& kg,
                                const StopwordList& stopwords, std::size_t block_size);

}  // namespace factcheck
