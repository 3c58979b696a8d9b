#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <vector>

#include "factcheck/dataset.hpp"
#include "factcheck/evaluation.hpp"
#include "factcheck/model.hpp"

namespace factcheck {

struct TrainConfig {
    // Default suits from-scratch training at toy scale; the PLM fine-tuning
    // preset is kFineTuneLearningRate.
    double learning_rate = 1e-2;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 16;
    std::size_t patience = 5;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static constexpr double kFineTuneLearningRate = 2e-5;
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    Metrics val_metrics;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;  // 1-based; minimum validation loss, earliest on ties
};

// Patience-based stopping on a monitored value (lower is better). Improvement
// means strictly lower; ties do not reset patience. An improving epoch never
// stops training, so patience 0 stops at the first non-improving epoch.
class EarlyStopper {
public:
    explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

    // Feed the value observed after `epoch` (1-based, increasing). Returns
    // true when training should stop after this epoch.
    bool observe(std::size_t epoch, double value) {
        if (value < best_value_) {
            best_value_ = value;
            best_epoch_ = epoch;
            return false;
        }
        return epoch - best_epoch_ >= patience_;
    }

    std::size_t best_epoch() const { return best_epoch_; }
    double best_value() const { return best_value_; }

private:
    std::size_t patience_;
    std::size_t best_epoch_ = 0;
    double best_value_ = std::numeric_limits<double>::infinity();
};

// Bias-corrected Adam over the model's tensor list. Slot i holds the moment
// buffers of the i-th parameter view.
class AdamOptimizer {
public:
    AdamOptimizer(double learning_rate, double beta1, double beta2, double epsilon)
        : learning_rate_(learning_rate), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

    void begin_step() { ++step_; }
    void update(std::size_t slot, std::span<double> weights, std::span<const double> grads);

private:
    double learning_rate_, beta1_, beta2_, epsilon_;
    std::size_t step_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

struct TrainResult {
    Model model;  // parameters snapshotted at best_epoch
    TrainHistory history;
};

// Mini-batch training with a seeded shuffle per epoch, one Adam step per
// batch, per-epoch validation, and early stopping on validation loss. Fact
// paragraphs and encodings are computed once per example up front. Throws
// on non-finite loss with a diagnostic naming the batch.
TrainResult train(const Model& initial, const LabeledDataset& train_set,
                  const LabeledDataset& val_set, const KnowledgeGraph& kg,
                  const StopwordList& stopwords, const TrainConfig& config);

inline constexpr int kCheckpointFormatVersion = 1;

// Self-describing JSON document: format version, variant, config, vocabulary
// and all weight tensors at full double precision, so a load reproduces
// bitwise-identical forward outputs.
void save_checkpoint(const Model& model, const std::filesystem::path& path);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace factcheck
