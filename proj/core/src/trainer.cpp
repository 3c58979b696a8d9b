#include "factcheck/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/rng.hpp"

namespace factcheck {

void AdamOptimizer::update(std::size_t slot, std::span<double> weights,
                           std::span<const double> grads) {
    if (weights.size() != grads.size()) {
        throw std::invalid_argument("AdamOptimizer: weight/gradient size mismatch");
    }
    if (slot >= m_.size()) {
        m_.resize(slot + 1);
        v_.resize(slot + 1);
    }
    if (m_[slot].empty()) {
        m_[slot].assign(weights.size(), 0.0);
        v_[slot].assign(weights.size(), 0.0);
    }

    const double bias1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
    const double bias2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double g = grads[i];
        m_[slot][i] = beta1_ * m_[slot][i] + (1.0 - beta1_) * g;
        v_[slot][i] = beta2_ * v_[slot][i] + (1.0 - beta2_) * g * g;
        const double m_hat = m_[slot][i] / bias1;
        const double v_hat = v_[slot][i] / bias2;
        weights[i] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + epsilon_);
    }
}

namespace {

struct PreparedExample {
    EncodedSequence pair_seq;
    EncodedSequence fact_seq;
    Label gold = Label::entailment;
};

std::vector<PreparedExample> prepare(const Model& model, const LabeledDataset& dataset,
                                     const KnowledgeGraph& kg, const StopwordList& stopwords) {
    std::vector<PreparedExample> prepared;
    prepared.reserve(dataset.size());
    for (const Example& example : dataset.examples) {
        PreparedExample p;
        p.pair_seq =
            encode_pair(model.vocab, example.premise, example.hypothesis, model.config.max_len_pair);
        if (model.variant == ModelVariant::proposed) {
            // Retrieval is deterministic, so caching per example is exact.
            const FactParagraph facts = facts_for_hypothesis(example.hypothesis, kg, stopwords);
            p.fact_seq = encode_text(model.vocab, facts.text, model.config.max_len_fact);
        }
        p.gold = example.label;
        prepared.push_back(std::move(p));
    }
    return prepared;
}

double max_parameter_norm(const Model& model) {
    double max_abs = 0.0;
    for (const auto& [name, values] : parameter_views(model)) {
        (void)name;
        for (const double v : values) max_abs = std::max(max_abs, std::abs(v));
    }
    return max_abs;
}

}  // namespace

TrainResult train(const Model& initial, const LabeledDataset& train_set,
                  const LabeledDataset& val_set, const KnowledgeGraph& kg,
                  const StopwordList& stopwords, const TrainConfig& config) {
    if (train_set.empty() || val_set.empty()) {
        throw std::invalid_argument("train: datasets must be non-empty");
    }
    if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
    if (config.max_epochs < 1) throw std::invalid_argument("train: max_epochs must be >= 1");

    Model model = initial;
    const std::vector<PreparedExample> train_prepared = prepare(model, train_set, kg, stopwords);
    const std::vector<PreparedExample> val_prepared = prepare(model, val_set, kg, stopwords);

    SeededRng rng(config.seed);
    AdamOptimizer optimizer(config.learning_rate, config.beta1, config.beta2, config.epsilon);
    EarlyStopper stopper(config.patience);

    Model best_model = model;
    TrainHistory history;

    std::vector<std::size_t> order(train_prepared.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        rng.shuffle(order);

        double train_loss_sum = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const std::size_t batch_n = end - start;

            ModelGrads grads = zero_grads_like(model);
            double batch_loss = 0.0;
            ForwardCache cache;
            for (std::size_t i = start; i < end; ++i) {
                const PreparedExample& ex = train_prepared[order[i]];
                const auto probs = forward_cached(model, ex.pair_seq, ex.fact_seq, cache);
                batch_loss += cross_entropy(probs, ex.gold);
                accumulate_gradients(model, ex.pair_seq, ex.fact_seq, cache, ex.gold, grads);
            }
            batch_loss /= static_cast<double>(batch_n);
            if (!std::isfinite(batch_loss)) {
                std::ostringstream msg;
                msg << "train: non-finite loss in epoch " << epoch << ", batch " << batch_index
                    << " (max |param| = " << max_parameter_norm(model) << ")";
                throw std::runtime_error(msg.str());
            }
            train_loss_sum += batch_loss * static_cast<double>(batch_n);
            scale_gradients(grads, 1.0 / static_cast<double>(batch_n));

            optimizer.begin_step();
            auto weight_views = parameter_views(model);
            auto grad_views = parameter_views(grads);
            for (std::size_t slot = 0; slot < weight_views.size(); ++slot) {
                optimizer.update(slot, weight_views[slot].second, grad_views[slot].second);
            }
            ++batch_index;
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = train_loss_sum / static_cast<double>(train_prepared.size());

        double val_loss_sum = 0.0;
        std::vector<Label> gold, predicted;
        gold.reserve(val_prepared.size());
        predicted.reserve(val_prepared.size());
        ForwardCache cache;
        for (const PreparedExample& ex : val_prepared) {
            const auto probs = forward_cached(model, ex.pair_seq, ex.fact_seq, cache);
            val_loss_sum += cross_entropy(probs, ex.gold);
            gold.push_back(ex.gold);
            predicted.push_back(argmax_label(probs));
        }
        record.val_loss = val_loss_sum / static_cast<double>(val_prepared.size());
        if (!std::isfinite(record.val_loss)) {
            throw std::runtime_error("train: non-finite validation loss in epoch " +
                                     std::to_string(epoch));
        }
        record.val_metrics = metrics_from_pairs(gold, predicted);
        history.epochs.push_back(record);

        const bool improved = record.val_loss < stopper.best_value();
        const bool stop = stopper.observe(epoch, record.val_loss);
        if (improved) best_model = model;
        if (stop) break;
    }

    history.best_epoch = stopper.best_epoch();
    return TrainResult{std::move(best_model), std::move(history)};
}

// ---- checkpoint -------------------------------------------------------

namespace {

using nlohmann::ordered_json;

ordered_json tensor_json(std::span<const double> values, std::vector<std::size_t> shape) {
    ordered_json t;
    t["shape"] = shape;
    t["data"] = std::vector<double>(values.begin(), values.end());
    return t;
}

std::vector<std::size_t> tensor_shape(const Model& model, const std::string& name) {
    const auto matrix_shape = [](const Matrix& m) {
        return std::vector<std::size_t>{m.rows, m.cols};
    };
    if (name == "nli.embedding") return matrix_shape(model.nli_encoder.embedding);
    if (name == "nli.proj") return matrix_shape(model.nli_encoder.proj);
    if (name == "nli.bias") return {model.nli_encoder.bias.size()};
    if (name == "fact.embedding") return matrix_shape(model.fact_encoder->embedding);
    if (name == "fact.proj") return matrix_shape(model.fact_encoder->proj);
    if (name == "fact.bias") return {model.fact_encoder->bias.size()};
    if (name == "classifier.w1") return matrix_shape(model.classifier.w1);
    if (name == "classifier.b1") return {model.classifier.b1.size()};
    if (name == "classifier.w2") return matrix_shape(model.classifier.w2);
    if (name == "classifier.b2") return {model.classifier.b2.size()};
    throw std::logic_error("unknown tensor name: " + name);
}

void read_tensor(const ordered_json& tensors, const std::string& name, std::span<double> out,
                 const std::vector<std::size_t>& expected_shape) {
    if (!tensors.contains(name)) throw ParseError("checkpoint missing tensor '" + name + "'");
    const ordered_json& t = tensors[name];
    const auto shape = t.at("shape").get<std::vector<std::size_t>>();
    if (shape != expected_shape) throw ParseError("checkpoint tensor '" + name + "' has wrong shape");
    const auto data = t.at("data").get<std::vector<double>>();
    if (data.size() != out.size()) throw ParseError("checkpoint tensor '" + name + "' has wrong size");
    std::copy(data.begin(), data.end(), out.begin());
}

}  // namespace

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
    ordered_json doc;
    doc["format"] = "factcheck-checkpoint";
    doc["format_version"] = kCheckpointFormatVersion;
    doc["variant"] = std::string(variant_name(model.variant));
    doc["config"] = {
        {"embed_dim", model.config.embed_dim},
        {"hidden_dim", model.config.hidden_dim},
        {"max_len_pair", model.config.max_len_pair},
        {"max_len_fact", model.config.max_len_fact},
    };
    doc["vocab"] = model.vocab.surface_tokens();

    ordered_json tensors;
    for (const auto& [name, values] : parameter_views(model)) {
        tensors[name] = tensor_json(values, tensor_shape(model, name));
    }
    doc["tensors"] = std::move(tensors);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint: " + path.string());
    out << doc.dump() << '\n';
    if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

Model load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path.string());
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const ordered_json::exception& e) {
        throw ParseError("corrupted checkpoint " + path.string() + ": " + e.what());
    }

    if (doc.value("format", "") != "factcheck-checkpoint") {
        throw ParseError("not a checkpoint file: " + path.string());
    }
    const int version = doc.value("format_version", -1);
    if (version != kCheckpointFormatVersion) {
        throw ParseError("unsupported checkpoint format version " + std::to_string(version));
    }

    Model model;
    model.variant = variant_from_string(doc.at("variant").get<std::string>());
    const ordered_json& config = doc.at("config");
    model.config.embed_dim = config.at("embed_dim").get<std::size_t>();
    model.config.hidden_dim = config.at("hidden_dim").get<std::size_t>();
    model.config.max_len_pair = config.at("max_len_pair").get<std::size_t>();
    model.config.max_len_fact = config.at("max_len_fact").get<std::size_t>();
    model.vocab = Vocabulary::from_tokens(doc.at("vocab").get<std::vector<std::string>>());

    // Rebuild the tensor layout, then fill from the document.
    SeededRng rng(0);
    Model shaped = make_model(model.variant, model.vocab, model.config, rng);
    model.nli_encoder = std::move(shaped.nli_encoder);
    model.fact_encoder = std::move(shaped.fact_encoder);
    model.classifier = std::move(shaped.classifier);

    const ordered_json& tensors = doc.at("tensors");
    for (auto& [name, values] : parameter_views(model)) {
        read_tensor(tensors, name, values, tensor_shape(model, name));
    }
    return model;
}

}  // namespace factcheck
