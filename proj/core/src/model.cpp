#include "factcheck/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "factcheck/errors.hpp"
#include "factcheck/tokenize.hpp"

namespace factcheck {

Label label_from_string(std::string_view text) {
    const std::string lowered = ascii_lower(trim(text));
    if (lowered == "entailment") return Label::entailment;
    if (lowered == "contradiction") return Label::contradiction;
    if (lowered == "neutral") return Label::neutral;
    throw ParseError("unknown label: '" + std::string(text) + "'");
}

std::string_view label_name(Label label) {
    switch (label) {
        case Label::entailment: return "entailment";
        case Label::contradiction: return "contradiction";
        case Label::neutral: return "neutral";
    }
    return "entailment";
}

std::string_view variant_name(ModelVariant variant) {
    return variant == ModelVariant::proposed ? "proposed" : "baseline";
}

ModelVariant variant_from_string(std::string_view text) {
    const std::string lowered = ascii_lower(trim(text));
    if (lowered == "proposed") return ModelVariant::proposed;
    if (lowered == "baseline") return ModelVariant::baseline;
    throw ParseError("unknown model variant: '" + std::string(text) + "'");
}

namespace {

EncoderParams make_encoder(std::size_t vocab_size, const ModelConfig& config) {
    EncoderParams params;
    params.embedding = Matrix(vocab_size, config.embed_dim);
    params.proj = Matrix(config.hidden_dim, config.embed_dim);
    params.bias.assign(config.hidden_dim, 0.0);
    return params;
}

}  // namespace

Model make_model(ModelVariant variant, Vocabulary vocab, const ModelConfig& config,
                 SeededRng& rng) {
    Model model;
    model.variant = variant;
    model.vocab = std::move(vocab);
    model.config = config;
    model.nli_encoder = make_encoder(model.vocab.size(), config);
    if (variant == ModelVariant::proposed) {
        model.fact_encoder = make_encoder(model.vocab.size(), config);
    }
    model.classifier.w1 = Matrix(config.hidden_dim, model.classifier_input_dim());
    model.classifier.b1.assign(config.hidden_dim, 0.0);
    model.classifier.w2 = Matrix(kNumLabels, config.hidden_dim);
    model.classifier.b2.assign(kNumLabels, 0.0);

    for (auto& [name, values] : parameter_views(model)) {
        (void)name;
        for (double& v : values) v = rng.uniform_real(-0.1, 0.1);
    }
    return model;
}

std::array<double, 3> softmax3(const std::array<double, 3>& logits) {
    const double max_logit = std::max({logits[0], logits[1], logits[2]});
    std::array<double, 3> out{};
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        out[i] = std::exp(logits[i] - max_logit);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

Label argmax_label(const std::array<double, 3>& probs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (probs[i] > probs[best]) best = i;
    }
    return static_cast<Label>(static_cast<int>(best));
}

double cross_entropy(const std::array<double, 3>& probs, Label gold) {
    const double p = std::max(probs[static_cast<std::size_t>(gold)], 1e-12);
    return -std::log(p);
}

std::array<double, 3> forward_cached(const Model& model, const EncodedSequence& pair_seq,
                                     const EncodedSequence& fact_seq, ForwardCache& cache) {
    const std::vector<double> h_nli = encode_sequence_cached(model.nli_encoder, pair_seq, cache.nli);

    cache.fused = h_nli;
    if (model.variant == ModelVariant::proposed) {
        const std::vector<double> h_fact =
            encode_sequence_cached(*model.fact_encoder, fact_seq, cache.fact);
        cache.fused.insert(cache.fused.end(), h_fact.begin(), h_fact.end());
    }
    if (cache.fused.size() != model.classifier.w1.cols) {
        throw std::invalid_argument("forward: classifier input width mismatch");
    }

    cache.hidden_pre = matvec(model.classifier.w1, cache.fused);
    for (std::size_t i = 0; i < cache.hidden_pre.size(); ++i) {
        cache.hidden_pre[i] += model.classifier.b1[i];
    }
    cache.hidden = cache.hidden_pre;
    for (double& v : cache.hidden) v = std::max(v, 0.0);

    const std::vector<double> logits = matvec(model.classifier.w2, cache.hidden);
    for (std::size_t i = 0; i < 3; ++i) cache.logits[i] = logits[i] + model.classifier.b2[i];
    cache.probs = softmax3(cache.logits);
    return cache.probs;
}

std::array<double, 3> forward(const Model& model, std::string_view premise,
                              std::string_view hypothesis, std::string_view fact_text) {
    const EncodedSequence pair_seq =
        encode_pair(model.vocab, premise, hypothesis, model.config.max_len_pair);
    EncodedSequence fact_seq;
    if (model.variant == ModelVariant::proposed) {
        fact_seq = encode_text(model.vocab, fact_text, model.config.max_len_fact);
    }
    ForwardCache cache;
    return forward_cached(model, pair_seq, fact_seq, cache);
}

Prediction predict(const Model& model, std::string_view premise, std::string_view hypothesis,
                   const KnowledgeGraph& kg, const StopwordList& stopwords) {
    Prediction out;
    out.facts = facts_for_hypothesis(hypothesis, kg, stopwords);
    out.probs = forward(model, premise, hypothesis, out.facts.text);
    out.label = argmax_label(out.probs);
    return out;
}

ModelGrads zero_grads_like(const Model& model) {
    ModelGrads grads;
    grads.nli = make_encoder(model.vocab.size(), model.config);
    if (model.fact_encoder.has_value()) {
        grads.fact = make_encoder(model.vocab.size(), model.config);
    }
    grads.classifier.w1 = Matrix(model.config.hidden_dim, model.classifier_input_dim());
    grads.classifier.b1.assign(model.config.hidden_dim, 0.0);
    grads.classifier.w2 = Matrix(kNumLabels, model.config.hidden_dim);
    grads.classifier.b2.assign(kNumLabels, 0.0);
    return grads;
}

void accumulate_gradients(const Model& model, const EncodedSequence& pair_seq,
                          const EncodedSequence& fact_seq, const ForwardCache& cache, Label gold,
                          ModelGrads& grads) {
    const std::size_t hidden_dim = model.config.hidden_dim;

    // Softmax with cross-entropy collapses to probs - onehot(gold).
    std::array<double, 3> dlogits = cache.probs;
    dlogits[static_cast<std::size_t>(gold)] -= 1.0;

    std::vector<double> dhidden(hidden_dim, 0.0);
    for (std::size_t r = 0; r < 3; ++r) {
        grads.classifier.b2[r] += dlogits[r];
        double* grad_row = grads.classifier.w2.row(r);
        const double* w2_row = model.classifier.w2.row(r);
        for (std::size_t c = 0; c < hidden_dim; ++c) {
            grad_row[c] += dlogits[r] * cache.hidden[c];
            dhidden[c] += w2_row[c] * dlogits[r];
        }
    }

    // ReLU gate.
    for (std::size_t i = 0; i < hidden_dim; ++i) {
        if (cache.hidden_pre[i] <= 0.0) dhidden[i] = 0.0;
    }

    const std::size_t input_dim = model.classifier.w1.cols;
    std::vector<double> dfused(input_dim, 0.0);
    for (std::size_t r = 0; r < hidden_dim; ++r) {
        grads.classifier.b1[r] += dhidden[r];
        double* grad_row = grads.classifier.w1.row(r);
        const double* w1_row = model.classifier.w1.row(r);
        for (std::size_t c = 0; c < input_dim; ++c) {
            grad_row[c] += dhidden[r] * cache.fused[c];
            dfused[c] += w1_row[c] * dhidden[r];
        }
    }

    encoder_backward(model.nli_encoder, pair_seq, cache.nli,
                     std::span<const double>(dfused.data(), hidden_dim), grads.nli);
    if (model.variant == ModelVariant::proposed) {
        encoder_backward(*model.fact_encoder, fact_seq, cache.fact,
                         std::span<const double>(dfused.data() + hidden_dim, hidden_dim),
                         *grads.fact);
    }
}

void scale_gradients(ModelGrads& grads, double factor) {
    for (auto& [name, values] : parameter_views(grads)) {
        (void)name;
        for (double& v : values) v *= factor;
    }
}

namespace {

template <typename Span, typename Encoder>
void append_encoder_views(const std::string& prefix, Encoder& encoder,
                          std::vector<std::pair<std::string, Span>>& out) {
    out.emplace_back(prefix + ".embedding", Span(encoder.embedding.data));
    out.emplace_back(prefix + ".proj", Span(encoder.proj.data));
    out.emplace_back(prefix + ".bias", Span(encoder.bias));
}

template <typename Span, typename Classifier>
void append_classifier_views(Classifier& classifier,
                             std::vector<std::pair<std::string, Span>>& out) {
    out.emplace_back("classifier.w1", Span(classifier.w1.data));
    out.emplace_back("classifier.b1", Span(classifier.b1));
    out.emplace_back("classifier.w2", Span(classifier.w2.data));
    out.emplace_back("classifier.b2", Span(classifier.b2));
}

}  // namespace

std::vector<std::pair<std::string, std::span<double>>> parameter_views(Model& model) {
    std::vector<std::pair<std::string, std::span<double>>> out;
    append_encoder_views<std::span<double>>("nli", model.nli_encoder, out);
    if (model.fact_encoder.has_value()) {
        append_encoder_views<std::span<double>>("fact", *model.fact_encoder, out);
    }
    append_classifier_views<std::span<double>>(model.classifier, out);
    return out;
}

std::vector<std::pair<std::string, std::span<const double>>> parameter_views(const Model& model) {
    std::vector<std::pair<std::string, std::span<const double>>> out;
    append_encoder_views<std::span<const double>>("nli", model.nli_encoder, out);
    if (model.fact_encoder.has_value()) {
        append_encoder_views<std::span<const double>>("fact", *model.fact_encoder, out);
    }
    append_classifier_views<std::span<const double>>(model.classifier, out);
    return out;
}

std::vector<std::pair<std::string, std::span<double>>> parameter_views(ModelGrads& grads) {
    std::vector<std::pair<std::string, std::span<double>>> out;
    append_encoder_views<std::span<double>>("nli", grads.nli, out);
    if (grads.fact.has_value()) {
        append_encoder_views<std::span<double>>("fact", *grads.fact, out);
    }
    append_classifier_views<std::span<double>>(grads.classifier, out);
    return out;
}

}  // namespace factcheck
