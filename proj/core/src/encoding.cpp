#include "factcheck/encoding.hpp"

#include <cmath>
#include <stdexcept>

#include "factcheck/errors.hpp"
#include "factcheck/tokenize.hpp"

namespace factcheck {

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
    Vocabulary vocab;
    for (const std::string& token : tokens) vocab.add(token);
    return vocab;
}

std::int32_t Vocabulary::add(std::string token) {
    const std::int32_t id = static_cast<std::int32_t>(kReservedCount + tokens_.size());
    if (!ids_.emplace(token, id).second) {
        throw ParseError("duplicate vocabulary token: '" + token + "'");
    }
    tokens_.push_back(std::move(token));
    return id;
}

std::int32_t Vocabulary::id_of(std::string_view token) const {
    const auto it = ids_.find(std::string(token));
    return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
    return ids_.count(std::string(token)) > 0;
}

Vocabulary build_vocab(const std::vector<std::string>& corpus, std::size_t min_freq) {
    if (corpus.empty()) throw std::invalid_argument("build_vocab: empty corpus");
    if (min_freq < 1) throw std::invalid_argument("build_vocab: min_freq must be >= 1");

    std::unordered_map<std::string, std::size_t> counts;
    std::vector<std::string> first_seen;
    for (const std::string& text : corpus) {
        for (std::string& token : tokenize(text)) {
            auto [it, inserted] = counts.try_emplace(std::move(token), 0);
            if (inserted) first_seen.push_back(it->first);
            ++it->second;
        }
    }

    Vocabulary vocab;
    for (const std::string& token : first_seen) {
        if (counts[token] >= min_freq) vocab.add(token);
    }
    return vocab;
}

namespace {

EncodedSequence finalize_sequence(std::vector<std::int32_t> ids, std::size_t max_len) {
    EncodedSequence seq;
    if (ids.size() > max_len) ids.resize(max_len);
    seq.length = ids.size();
    ids.resize(max_len, Vocabulary::kPad);
    seq.ids = std::move(ids);
    return seq;
}

}  // namespace

EncodedSequence encode_text(const Vocabulary& vocab, std::string_view text, std::size_t max_len) {
    if (max_len < 1) throw std::invalid_argument("encode_text: max_len must be >= 1");
    std::vector<std::int32_t> ids;
    for (const std::string& token : tokenize(text)) ids.push_back(vocab.id_of(token));
    return finalize_sequence(std::move(ids), max_len);
}

EncodedSequence encode_pair(const Vocabulary& vocab, std::string_view premise,
                            std::string_view hypothesis, std::size_t max_len) {
    if (max_len < 1) throw std::invalid_argument("encode_pair: max_len must be >= 1");
    std::vector<std::int32_t> ids;
    for (const std::string& token : tokenize(premise)) ids.push_back(vocab.id_of(token));
    ids.push_back(Vocabulary::kSep);
    for (const std::string& token : tokenize(hypothesis)) ids.push_back(vocab.id_of(token));
    return finalize_sequence(std::move(ids), max_len);
}

std::vector<double> encode_sequence(const EncoderParams& params, const EncodedSequence& seq) {
    EncoderCache cache;
    return encode_sequence_cached(params, seq, cache);
}

std::vector<double> encode_sequence_cached(const EncoderParams& params, const EncodedSequence& seq,
                                           EncoderCache& cache) {
    if (seq.length > seq.ids.size()) {
        throw std::invalid_argument("encode_sequence: length exceeds id count");
    }
    const std::size_t embed_dim = params.embedding.cols;

    cache.meanpool.assign(embed_dim, 0.0);
    if (seq.length > 0) {
        for (std::size_t i = 0; i < seq.length; ++i) {
            const std::int32_t id = seq.ids[i];
            if (id == Vocabulary::kPad) continue;
            if (id < 0 || static_cast<std::size_t>(id) >= params.embedding.rows) {
                throw std::out_of_range("encode_sequence: token id " + std::to_string(id) +
                                        " outside embedding table");
            }
            const double* row = params.embedding.row(static_cast<std::size_t>(id));
            for (std::size_t d = 0; d < embed_dim; ++d) cache.meanpool[d] += row[d];
        }
        const double inv = 1.0 / static_cast<double>(seq.length);
        for (double& v : cache.meanpool) v *= inv;
    }

    cache.hidden = matvec(params.proj, cache.meanpool);
    for (std::size_t d = 0; d < cache.hidden.size(); ++d) {
        cache.hidden[d] = std::tanh(cache.hidden[d] + params.bias[d]);
    }
    return cache.hidden;
}

void encoder_backward(const EncoderParams& params, const EncodedSequence& seq,
                      const EncoderCache& cache, std::span<const double> dh,
                      EncoderParams& grads) {
    const std::size_t hidden_dim = params.proj.rows;
    const std::size_t embed_dim = params.proj.cols;

    // Through tanh: d(pre) = dh * (1 - h^2).
    std::vector<double> dpre(hidden_dim);
    for (std::size_t d = 0; d < hidden_dim; ++d) {
        dpre[d] = dh[d] * (1.0 - cache.hidden[d] * cache.hidden[d]);
    }

    for (std::size_t r = 0; r < hidden_dim; ++r) {
        grads.bias[r] += dpre[r];
        double* grad_row = grads.proj.row(r);
        for (std::size_t c = 0; c < embed_dim; ++c) {
            grad_row[c] += dpre[r] * cache.meanpool[c];
        }
    }

    if (seq.length == 0) return;
    const std::vector<double> dmean = matvec_transposed(params.proj, dpre);
    const double inv = 1.0 / static_cast<double>(seq.length);
    for (std::size_t i = 0; i < seq.length; ++i) {
        const std::int32_t id = seq.ids[i];
        if (id == Vocabulary::kPad) continue;
        double* grad_row = grads.embedding.row(static_cast<std::size_t>(id));
        for (std::size_t d = 0; d < embed_dim; ++d) grad_row[d] += dmean[d] * inv;
    }
}

}  // namespace factcheck
