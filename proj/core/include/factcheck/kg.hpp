#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace factcheck {

// One directed edge of the graph. Labels keep their original casing; matching
// elsewhere is case-insensitive on the source.
struct Triplet {
    std::string source;
    std::string relation;  // uppercase words joined by underscores, e.g. MEMILIKI_GEJALA
    std::string target;

    friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Relation labels are groups of letters/digits separated by single
// underscores (no leading/trailing/doubled underscore). Non-ASCII bytes
// count as letters.
bool valid_relation(std::string_view relation);

// Immutable triplet store with a lowercase source-entity index. Triplets keep
// file order; duplicates are retained. Safe for concurrent readers once built.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    // Validates invariants (non-empty trimmed fields, relation pattern) and
    // builds the index. Throws ParseError on a bad triplet.
    static KnowledgeGraph from_triplets(std::vector<Triplet> triplets);

    const std::vector<Triplet>& triplets() const { return triplets_; }
    std::size_t size() const { return triplets_.size(); }
    bool empty() const { return triplets_.empty(); }

    // Positions (ascending file order) of triplets whose lowercased source
    // equals `lowercase_source`; nullptr when the entity is unknown.
    const std::vector<std::size_t>* positions_for_source(std::string_view lowercase_source) const;

    // All triplets whose source matches `entity` case-insensitively, in file
    // order. Unknown entity gives an empty list.
    std::vector<Triplet> triplets_from_source(std::string_view entity) const;

    bool has_source(std::string_view lowercase_source) const {
        return positions_for_source(lowercase_source) != nullptr;
    }

    // Distinct lowercased source labels in first-appearance order.
    std::vector<std::string> unique_sources() const;
    // Distinct target labels (original casing, deduplicated case-insensitively)
    // in first-appearance order.
    std::vector<std::string> unique_targets() const;
    // Distinct relation labels in first-appearance order.
    std::vector<std::string> unique_relations() const;

private:
    std::vector<Triplet> triplets_;
    std::unordered_map<std::string, std::vector<std::size_t>> source_index_;
};

// Loads a UTF-8 TSV file: `source<TAB>relation<TAB>target`, one triplet per
// line, '#'-prefixed comment lines and blank lines ignored. Duplicate lines
// are retained. Throws IoError on read failure and ParseError (naming the
// line) on a malformed line or invalid relation.
KnowledgeGraph load_kg(const std::filesystem::path& path);

// Free-function form of the source lookup.
std::vector<Triplet> triplets_from_source(const KnowledgeGraph& kg, std::string_view entity);

// Number of triplets that exactly repeat an earlier triplet.
std::size_t duplicate_triplet_count(const KnowledgeGraph& kg);

}  // namespace factcheck
