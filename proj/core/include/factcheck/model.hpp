#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "factcheck/encoding.hpp"
#include "factcheck/knowledge.hpp"
#include "factcheck/rng.hpp"

namespace factcheck {

// Stable integer encoding, preserved across serialization.
enum class Label : int {
    entailment = 0,
    contradiction = 1,
    neutral = 2,
};

inline constexpr std::size_t kNumLabels = 3;

// Case-insensitive; throws ParseError on anything else.
Label label_from_string(std::string_view text);
std::string_view label_name(Label label);

enum class ModelVariant {
    baseline,  // NLI encoder straight into the classifier
    proposed,  // NLI encoder + fact encoder, concatenated
};

std::string_view variant_name(ModelVariant variant);
ModelVariant variant_from_string(std::string_view text);

struct ModelConfig {
    std::size_t embed_dim = 32;
    std::size_t hidden_dim = 32;
    std::size_t max_len_pair = 64;
    std::size_t max_len_fact = 64;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// One hidden ReLU layer of width hidden_dim, then linear to the 3 classes.
// Input width is hidden_dim for the baseline and 2*hidden_dim when the fact
// encoder is present.
struct ClassifierParams {
    Matrix w1;               // hidden_dim x input_dim
    std::vector<double> b1;  // hidden_dim
    Matrix w2;               // 3 x hidden_dim
    std::vector<double> b2;  // 3

    friend bool operator==(const ClassifierParams&, const ClassifierParams&) = default;
};

struct Model {
    ModelVariant variant = ModelVariant::proposed;
    Vocabulary vocab;
    ModelConfig config;
    EncoderParams nli_encoder;
    std::optional<EncoderParams> fact_encoder;  // absent in the baseline
    ClassifierParams classifier;

    std::size_t classifier_input_dim() const {
        return variant == ModelVariant::proposed ? 2 * config.hidden_dim : config.hidden_dim;
    }
};

// Fresh model with all weights drawn uniformly from (-0.1, 0.1).
Model make_model(ModelVariant variant, Vocabulary vocab, const ModelConfig& config, SeededRng& rng);

// Numerically stable softmax over the three logits.
std::array<double, 3> softmax3(const std::array<double, 3>& logits);

// Argmax with ties broken toward the lowest label id.
Label argmax_label(const std::array<double, 3>& probs);

// -ln(probs[gold]), with the probability clamped at 1e-12 before the log.
double cross_entropy(const std::array<double, 3>& probs, Label gold);

// Class probabilities for one example. The baseline ignores fact_text
// entirely. Probabilities sum to 1 within 1e-9.
std::array<double, 3> forward(const Model& model, std::string_view premise,
                              std::string_view hypothesis, std::string_view fact_text);

struct Prediction {
    Label label = Label::entailment;
    std::array<double, 3> probs{};
    FactParagraph facts;
};

// Retrieves facts for the hypothesis (the claim), then classifies.
Prediction predict(const Model& model, std::string_view premise, std::string_view hypothesis,
                   const KnowledgeGraph& kg, const StopwordList& stopwords);

// ---- training surface -------------------------------------------------

struct ForwardCache {
    EncoderCache nli;
    EncoderCache fact;
    std::vector<double> fused;      // [h_nli || h_fact] or h_nli
    std::vector<double> hidden_pre; // W1 * fused + b1
    std::vector<double> hidden;     // relu(hidden_pre)
    std::array<double, 3> logits{};
    std::array<double, 3> probs{};
};

// Forward pass over pre-encoded sequences; `fact_seq` is ignored by the
// baseline variant.
std::array<double, 3> forward_cached(const Model& model, const EncodedSequence& pair_seq,
                                     const EncodedSequence& fact_seq, ForwardCache& cache);

// Same tensor shapes as the model; used to accumulate gradients.
struct ModelGrads {
    EncoderParams nli;
    std::optional<EncoderParams> fact;
    ClassifierParams classifier;
};

ModelGrads zero_grads_like(const Model& model);

// Adds d(cross_entropy)/d(params) for one example into `grads`.
void accumulate_gradients(const Model& model, const EncodedSequence& pair_seq,
                          const EncodedSequence& fact_seq, const ForwardCache& cache, Label gold,
                          ModelGrads& grads);

void scale_gradients(ModelGrads& grads, double factor);

// Named flat views over every parameter tensor, in a fixed order shared by
// the optimizer, the checkpoint format, and diagnostics.
std::vector<std::pair<std::string, std::span<double>>> parameter_views(Model& model);
std::vector<std::pair<std::string, std::span<double>>> parameter_views(ModelGrads& grads);
std::vector<std::pair<std::string, std::span<const double>>> parameter_views(const Model& model);

}  // namespace factcheck
