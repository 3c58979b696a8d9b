#include "factcheck/dataset.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/rng.hpp"
#include "factcheck/tokenize.hpp"

namespace factcheck {

namespace {

using nlohmann::ordered_json;

Example parse_example_line(const std::string& line, std::size_t line_no) {
    const auto where = " at line " + std::to_string(line_no);
    ordered_json obj;
    try {
        obj = ordered_json::parse(line);
    } catch (const ordered_json::exception& e) {
        throw ParseError("invalid JSON" + where + ": " + e.what());
    }
    if (!obj.is_object()) throw ParseError("expected a JSON object" + where);
    for (const char* key : {"premise", "hypothesis", "label"}) {
        if (!obj.contains(key) || !obj[key].is_string()) {
            throw ParseError(std::string("missing or non-string key '") + key + "'" + where);
        }
    }
    Example example;
    example.premise = obj["premise"].get<std::string>();
    example.hypothesis = obj["hypothesis"].get<std::string>();
    try {
        example.label = label_from_string(obj["label"].get<std::string>());
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + where);
    }
    if (trim(example.premise).empty()) throw ParseError("empty premise" + where);
    if (trim(example.hypothesis).empty()) throw ParseError("empty hypothesis" + where);
    return example;
}

}  // namespace

LabeledDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset file: " + path.string());
    LabeledDataset dataset;
    dataset.provenance = DatasetProvenance::loaded;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        dataset.examples.push_back(parse_example_line(line, line_no));
    }
    if (in.bad()) throw IoError("failed reading dataset file: " + path.string());
    return dataset;
}

void save_dataset(const LabeledDataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset file: " + path.string());
    for (const Example& example : dataset.examples) {
        ordered_json obj;
        obj["premise"] = example.premise;
        obj["hypothesis"] = example.hypothesis;
        obj["label"] = std::string(label_name(example.label));
        out << obj.dump() << '\n';
    }
    if (!out) throw IoError("failed writing dataset file: " + path.string());
}

DedupResult dedup(const LabeledDataset& dataset) {
    DedupResult result;
    result.dataset.provenance = dataset.provenance;
    std::unordered_map<std::string, Label> seen;
    for (const Example& example : dataset.examples) {
        std::string key = trim(example.premise) + '\x1f' + trim(example.hypothesis);
        const auto [it, inserted] = seen.emplace(std::move(key), example.label);
        if (inserted) {
            result.dataset.examples.push_back(example);
        } else {
            ++result.removed;
            if (it->second != example.label) ++result.label_conflicts;
        }
    }
    return result;
}

namespace {

struct PartSizes {
    std::size_t train = 0, val = 0, test = 0;
};

PartSizes two_stage_sizes(std::size_t n) {
    PartSizes sizes;
    sizes.test = n / 5;  // floor(0.2 * n)
    const std::size_t remainder = n - sizes.test;
    sizes.val = remainder / 5;
    sizes.train = remainder - sizes.val;
    return sizes;
}

// Marks each index train (0), val (1) or test (2) after a seeded shuffle.
void assign_parts(std::vector<std::size_t>& indices, SeededRng& rng, std::vector<int>& part_of) {
    rng.shuffle(indices);
    const PartSizes sizes = two_stage_sizes(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        int part = 0;
        if (i < sizes.test) {
            part = 2;
        } else if (i < sizes.test + sizes.val) {
            part = 1;
        }
        part_of[indices[i]] = part;
    }
}

}  // namespace

SplitResult split(const LabeledDataset& dataset, std::uint64_t seed, bool stratified) {
    const std::size_t n = dataset.size();
    if (n < 5) throw std::invalid_argument("split: need at least 5 examples");

    SeededRng rng(seed);
    std::vector<int> part_of(n, 0);

    if (stratified) {
        for (std::size_t c = 0; c < kNumLabels; ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < n; ++i) {
                if (static_cast<std::size_t>(dataset.examples[i].label) == c) members.push_back(i);
            }
            const PartSizes sizes = two_stage_sizes(members.size());
            if (sizes.train == 0 || sizes.val == 0 || sizes.test == 0) {
                throw std::invalid_argument(
                    "split: class '" + std::string(label_name(static_cast<Label>(c))) +
                    "' too small for a stratified split");
            }
            assign_parts(members, rng, part_of);
        }
    } else {
        std::vector<std::size_t> indices(n);
        for (std::size_t i = 0; i < n; ++i) indices[i] = i;
        assign_parts(indices, rng, part_of);
    }

    SplitResult result;
    result.train.provenance = dataset.provenance;
    result.val.provenance = dataset.provenance;
    result.test.provenance = dataset.provenance;
    for (std::size_t i = 0; i < n; ++i) {
        switch (part_of[i]) {
            case 0: result.train.examples.push_back(dataset.examples[i]); break;
            case 1: result.val.examples.push_back(dataset.examples[i]); break;
            default: result.test.examples.push_back(dataset.examples[i]); break;
        }
    }
    return result;
}

}  // namespace factcheck
