#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "factcheck/model.hpp"

namespace factcheck {

// One premise/hypothesis pair. Both texts are non-empty after trimming.
struct Example {
    std::string premise;
    std::string hypothesis;
    Label label = Label::entailment;

    friend bool operator==(const Example&, const Example&) = default;
};

enum class DatasetProvenance { loaded, generated };

struct LabeledDataset {
    std::vector<Example> examples;
    DatasetProvenance provenance = DatasetProvenance::loaded;

    std::size_t size() const { return examples.size(); }
    bool empty() const { return examples.empty(); }
};

// JSONL, one object per line with keys premise/hypothesis/label. Labels are
// accepted case-insensitively and normalized. Errors name the line.
LabeledDataset load_dataset(const std::filesystem::path& path);

// Canonical JSONL form (keys premise, hypothesis, label; lowercase label
// strings; trailing newline). load(save(d)) == d, and saving a loaded
// canonical file reproduces it byte for byte.
void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path);

struct DedupResult {
    LabeledDataset dataset;
    std::size_t removed = 0;          // total duplicate pairs dropped
    std::size_t label_conflicts = 0;  // dropped pairs whose label disagreed with the kept one
};

// Keeps the first occurrence of each (premise, hypothesis) pair, compared
// after trimming; order otherwise preserved.
DedupResult dedup(const LabeledDataset& dataset);

struct SplitResult {
    LabeledDataset train;
    LabeledDataset val;
    LabeledDataset test;
};

// Two-stage split: test = floor(0.2*n) of the whole, then val = floor(0.2*r)
// of the remainder, train = rest (so 64/16/20 at n divisible by 25). A seeded
// shuffle decides membership; each part keeps the input order. Stratified
// mode applies the same rule per label class and errors when any class would
// leave a part empty. Requires n >= 5.
SplitResult split(const LabeledDataset& dataset, std::uint64_t seed, bool stratified);

}  // namespace factcheck
