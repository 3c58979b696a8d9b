#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factcheck/matrix.hpp"

namespace factcheck {

// Token -> dense id map with three reserved ids. Real tokens start at id 3
// and are stored in first-occurrence order.
class Vocabulary {
public:
    static constexpr std::int32_t kPad = 0;
    static constexpr std::int32_t kUnk = 1;
    static constexpr std::int32_t kSep = 2;
    static constexpr std::size_t kReservedCount = 3;

    Vocabulary() = default;

    // Rebuilds a vocabulary from the surface tokens of ids 3..V-1 (the
    // checkpoint representation). Throws ParseError on duplicates.
    static Vocabulary from_tokens(const std::vector<std::string>& tokens);

    // Appends a token; returns its id. Duplicate tokens throw ParseError.
    std::int32_t add(std::string token);

    // Id of a token, kUnk when absent.
    std::int32_t id_of(std::string_view token) const;
    bool contains(std::string_view token) const;

    std::size_t size() const { return kReservedCount + tokens_.size(); }
    const std::vector<std::string>& surface_tokens() const { return tokens_; }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
        return a.tokens_ == b.tokens_;
    }

private:
    std::vector<std::string> tokens_;  // index i holds the token of id i+3
    std::unordered_map<std::string, std::int32_t> ids_;
};

// Whitespace tokenization with lowercasing and edge-punctuation stripping
// (no stopword removal); tokens reaching `min_freq` enter the vocabulary in
// first-occurrence order. The corpus list itself must be non-empty.
Vocabulary build_vocab(const std::vector<std::string>& corpus, std::size_t min_freq);

// Fixed-width id sequence: `ids` is padded with kPad to the requested length,
// `length` is the pre-padding token count.
struct EncodedSequence {
    std::vector<std::int32_t> ids;
    std::size_t length = 0;
};

// Tokenize, map unknowns to UNK, truncate to max_len, pad with PAD.
EncodedSequence encode_text(const Vocabulary& vocab, std::string_view text, std::size_t max_len);

// tokens(premise) ++ [SEP] ++ tokens(hypothesis), then truncate/pad. The
// prefix survives truncation.
EncodedSequence encode_pair(const Vocabulary& vocab, std::string_view premise,
                            std::string_view hypothesis, std::size_t max_len);

// Trainable sequence encoder: mean-pooled embeddings through one affine map
// and tanh. All double precision so gradient checks are meaningful.
struct EncoderParams {
    Matrix embedding;          // V x d_e
    Matrix proj;               // d_h x d_e
    std::vector<double> bias;  // d_h

    friend bool operator==(const EncoderParams&, const EncoderParams&) = default;
};

// Intermediates kept for backpropagation.
struct EncoderCache {
    std::vector<double> meanpool;  // d_e
    std::vector<double> hidden;    // d_h, the tanh output
};

// h = tanh(W * meanpool + b) with meanpool = (1/length) * sum of embeddings of
// the first `length` non-PAD ids. length == 0 pools to the zero vector, so an
// empty fact paragraph encodes as tanh(b). Throws std::out_of_range on an id
// outside the embedding table.
std::vector<double> encode_sequence(const EncoderParams& params, const EncodedSequence& seq);
std::vector<double> encode_sequence_cached(const EncoderParams& params, const EncodedSequence& seq,
                                           EncoderCache& cache);

// Accumulates d(loss)/d(params) into `grads` given d(loss)/d(h).
void encoder_backward(const EncoderParams& params, const EncodedSequence& seq,
                      const EncoderCache& cache, std::span<const double> dh,
                      EncoderParams& grads);

}  // namespace factcheck
