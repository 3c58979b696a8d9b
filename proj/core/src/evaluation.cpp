#include "factcheck/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace factcheck {

Metrics metrics_from_confusion(
    const std::array<std::array<std::size_t, kNumLabels>, kNumLabels>& confusion) {
    Metrics m;
    m.confusion = confusion;

    std::size_t correct = 0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        m.per_class_true[c] = confusion[c][c];
        correct += confusion[c][c];
        for (std::size_t p = 0; p < kNumLabels; ++p) m.total += confusion[c][p];
    }

    double precision_sum = 0.0, recall_sum = 0.0, f1_sum = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        const double tp = static_cast<double>(confusion[c][c]);
        std::size_t predicted_c = 0, gold_c = 0;
        for (std::size_t g = 0; g < kNumLabels; ++g) predicted_c += confusion[g][c];
        for (std::size_t p = 0; p < kNumLabels; ++p) gold_c += confusion[c][p];
        const double precision_c = predicted_c == 0 ? 0.0 : tp / static_cast<double>(predicted_c);
        const double recall_c = gold_c == 0 ? 0.0 : tp / static_cast<double>(gold_c);
        const double f1_c = (precision_c + recall_c) == 0.0
                                ? 0.0
                                : 2.0 * precision_c * recall_c / (precision_c + recall_c);
        precision_sum += precision_c;
        recall_sum += recall_c;
        f1_sum += f1_c;
    }
    m.precision = precision_sum / static_cast<double>(kNumLabels);
    m.recall = recall_sum / static_cast<double>(kNumLabels);
    m.f1 = f1_sum / static_cast<double>(kNumLabels);
    m.accuracy = m.total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(m.total);
    return m;
}

Metrics metrics_from_pairs(std::span<const Label> gold, std::span<const Label> predicted) {
    if (gold.size() != predicted.size()) {
        throw std::invalid_argument("metrics_from_pairs: size mismatch");
    }
    std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
    for (std::size_t i = 0; i < gold.size(); ++i) {
        confusion[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(predicted[i])] += 1;
    }
    return metrics_from_confusion(confusion);
}

Metrics evaluate(const Model& model, const LabeledDataset& dataset, const KnowledgeGraph& kg,
                 const StopwordList& stopwords) {
    if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
    std::vector<Label> gold, predicted;
    gold.reserve(dataset.size());
    predicted.reserve(dataset.size());
    for (const Example& example : dataset.examples) {
        gold.push_back(example.label);
        predicted.push_back(predict(model, example.premise, example.hypothesis, kg, stopwords).label);
    }
    return metrics_from_pairs(gold, predicted);
}

namespace {

// Ascending average ranks of |d|.
std::vector<double> average_ranks(const std::vector<double>& abs_diffs) {
    const std::size_t n = abs_diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return abs_diffs[a] < abs_diffs[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diffs[order[j + 1]] == abs_diffs[order[i]]) ++j;
        // positions i..j (0-based) share the average rank
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double exact_two_sided_p(const std::vector<double>& ranks, double w_observed) {
    const std::size_t n = ranks.size();
    const double total = std::accumulate(ranks.begin(), ranks.end(), 0.0);
    const std::uint64_t assignments = 1ULL << n;
    std::uint64_t hits = 0;
    for (std::uint64_t mask = 0; mask < assignments; ++mask) {
        double w_plus = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1ULL << i)) w_plus += ranks[i];
        }
        const double w_min = std::min(w_plus, total - w_plus);
        if (w_min <= w_observed + 1e-9) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(assignments);
}

double normal_two_sided_p(const std::vector<double>& ranks, double w_observed) {
    const double n = static_cast<double>(ranks.size());
    const double mean = n * (n + 1.0) / 4.0;
    double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;

    // Tie correction: subtract sum(t^3 - t)/48 over groups of tied ranks.
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        variance -= (t * t * t - t) / 48.0;
        i = j + 1;
    }

    const double sigma = std::sqrt(variance);
    const double z = (w_observed - mean + 0.5) / sigma;  // continuity correction toward the mean
    const double p = std::erfc(-z / std::sqrt(2.0));     // 2 * Phi(z) for z <= 0
    return std::min(1.0, p);
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs) {
    if (pairs.empty()) throw std::invalid_argument("wilcoxon_signed_rank: need at least one pair");

    std::vector<double> diffs;
    diffs.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
        const double d = x - y;
        if (d != 0.0) diffs.push_back(d);
    }

    WilcoxonResult result;
    result.n_effective = diffs.size();
    if (diffs.empty()) return result;  // degenerate: W = 0, p = 1

    std::vector<double> abs_diffs(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) abs_diffs[i] = std::abs(diffs[i]);
    const std::vector<double> ranks = average_ranks(abs_diffs);

    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0.0) {
            result.w_plus += ranks[i];
        } else {
            result.w_minus += ranks[i];
        }
    }
    result.w_statistic = std::min(result.w_plus, result.w_minus);

    if (result.n_effective <= 20) {
        result.exact = true;
        result.p_value = exact_two_sided_p(ranks, result.w_statistic);
    } else {
        result.exact = false;
        result.p_value = normal_two_sided_p(ranks, result.w_statistic);
    }
    return result;
}

ComparisonResult compare_models(const Model& baseline, const Model& proposed,
                                const LabeledDataset& test_set, const KnowledgeGraph& kg,
                                const StopwordList& stopwords, std::size_t block_size) {
    if (block_size < 1) throw std::invalid_argument("compare_models: block_size must be >= 1");
    if (test_set.empty()) throw std::invalid_argument("compare_models: empty test set");

    const std::size_t n = test_set.size();
    std::vector<Label> gold(n);
    std::vector<Label> baseline_pred(n), proposed_pred(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Example& example = test_set.examples[i];
        gold[i] = example.label;
        baseline_pred[i] =
            predict(baseline, example.premise, example.hypothesis, kg, stopwords).label;
        proposed_pred[i] =
            predict(proposed, example.premise, example.hypothesis, kg, stopwords).label;
    }

    ComparisonResult result;
    result.block_size = block_size;
    result.baseline = metrics_from_pairs(gold, baseline_pred);
    result.proposed = metrics_from_pairs(gold, proposed_pred);

    std::vector<std::pair<double, double>> block_pairs;
    for (std::size_t start = 0; start < n; start += block_size) {
        const std::size_t end = std::min(n, start + block_size);
        std::size_t baseline_correct = 0, proposed_correct = 0;
        for (std::size_t i = start; i < end; ++i) {
            baseline_correct += baseline_pred[i] == gold[i] ? 1 : 0;
            proposed_correct += proposed_pred[i] == gold[i] ? 1 : 0;
        }
        const double block_n = static_cast<double>(end - start);
        result.baseline_block_accuracy.push_back(static_cast<double>(baseline_correct) / block_n);
        result.proposed_block_accuracy.push_back(static_cast<double>(proposed_correct) / block_n);
        block_pairs.emplace_back(result.proposed_block_accuracy.back(),
                                 result.baseline_block_accuracy.back());
    }
    result.wilcoxon = wilcoxon_signed_rank(block_pairs);
    return result;
}

}  // namespace factcheck
