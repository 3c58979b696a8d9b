#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "factcheck/kg.hpp"

namespace factcheck {

// Lowercase word set used to filter query tokens before entity matching.
class StopwordList {
public:
    StopwordList() = default;

    // Normalizes entries to lowercase; rejects empty words and words with
    // internal whitespace.
    explicit StopwordList(const std::vector<std::string>& words);

    // Built-in Indonesian list; identical content ships as a data file
    // (stopwords_id.txt).
    static const StopwordList& default_indonesian();

    bool contains(std::string_view lowercase_word) const {
        return words_.count(std::string(lowercase_word)) > 0;
    }
    std::size_t size() const { return words_.size(); }
    std::vector<std::string> sorted_words() const;

private:
    std::unordered_set<std::string> words_;
};

// UTF-8 file, one lowercase word per line, '#' comments and blank lines
// ignored. Throws IoError / ParseError.
StopwordList load_stopwords(const std::filesystem::path& path);

// Verbalized facts retrieved for one hypothesis. `sentences` hold the raw
// verbalizations; `text` is their paragraph join (which capitalizes sentences
// after the first). Empty paragraph <=> no sentences <=> text == "".
struct FactParagraph {
    std::vector<std::string> sentences;
    std::vector<Triplet> provenance;  // parallel to sentences
    std::string text;

    bool empty() const { return sentences.empty(); }
};

// Step 1: lowercase, whitespace-split, strip edge punctuation, drop stopwords.
// Order and duplicates of the surviving words are preserved.
std::vector<std::string> preprocess_query(std::string_view text, const StopwordList& stopwords);

// Step 2: words that are known source entities, first occurrence wins,
// each entity at most once.
std::vector<std::string> match_entities(const std::vector<std::string>& words,
                                        const KnowledgeGraph& kg);

// Step 3: concatenation of the per-entity triplet lists, entity order outer,
// file order inner. Duplicates across entities are retained.
std::vector<Triplet> retrieve_triplets(const std::vector<std::string>& entities,
                                       const KnowledgeGraph& kg);

// Step 4: "source humanized(relation) target", where humanized lowercases the
// relation and replaces underscores with spaces. No trailing period.
std::string verbalize_triplet(const Triplet& t);

// Step 5: first sentence verbatim, later sentences get their first letter
// uppercased, joined with ". ", final "." appended. Empty list gives "".
std::string build_fact_paragraph(const std::vector<std::string>& sentences);

struct FactOptions {
    bool dedupe_triplets = false;  // drop exact repeat triplets after retrieval
};

// The full pipeline: preprocess -> match -> retrieve -> verbalize -> join.
// Total function; the worst case is an empty paragraph.
FactParagraph facts_for_hypothesis(std::string_view hypothesis, const KnowledgeGraph& kg,
                                   const StopwordList& stopwords, const FactOptions& options = {});

}  // namespace factcheck
