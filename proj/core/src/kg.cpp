#include "factcheck/kg.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "factcheck/errors.hpp"
#include "factcheck/tokenize.hpp"

namespace factcheck {

namespace {

bool relation_group_char(unsigned char c) {
    if (c >= 0x80) return true;  // UTF-8 continuation/lead bytes count as letters
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

void validate_triplet(const Triplet& t, std::size_t line_no) {
    const auto where = [&]() -> std::string {
        return line_no == 0 ? std::string{} : " at line " + std::to_string(line_no);
    };
    if (trim(t.source).empty() || trim(t.relation).empty() || trim(t.target).empty()) {
        throw ParseError("empty triplet field" + where());
    }
    if (!valid_relation(t.relation)) {
        throw ParseError("invalid relation label '" + t.relation + "'" + where());
    }
}

}  // namespace

bool valid_relation(std::string_view relation) {
    if (relation.empty()) return false;
    bool in_group = false;
    for (std::size_t i = 0; i < relation.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(relation[i]);
        if (c == '_') {
            if (!in_group) return false;  // leading or doubled underscore
            in_group = false;
        } else if (relation_group_char(c)) {
            in_group = true;
        } else {
            return false;
        }
    }
    return in_group;  // must not end on an underscore
}

KnowledgeGraph KnowledgeGraph::from_triplets(std::vector<Triplet> triplets) {
    KnowledgeGraph kg;
    kg.triplets_ = std::move(triplets);
    for (std::size_t i = 0; i < kg.triplets_.size(); ++i) {
        validate_triplet(kg.triplets_[i], 0);
        kg.source_index_[ascii_lower(kg.triplets_[i].source)].push_back(i);
    }
    return kg;
}

const std::vector<std::size_t>* KnowledgeGraph::positions_for_source(
    std::string_view lowercase_source) const {
    const auto it = source_index_.find(std::string(lowercase_source));
    return it == source_index_.end() ? nullptr : &it->second;
}

std::vector<Triplet> KnowledgeGraph::triplets_from_source(std::string_view entity) const {
    std::vector<Triplet> out;
    const auto* positions = positions_for_source(ascii_lower(entity));
    if (positions == nullptr) return out;
    out.reserve(positions->size());
    for (const std::size_t pos : *positions) out.push_back(triplets_[pos]);
    return out;
}

std::vector<std::string> KnowledgeGraph::unique_sources() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const Triplet& t : triplets_) {
        std::string key = ascii_lower(t.source);
        if (seen.insert(key).second) out.push_back(std::move(key));
    }
    return out;
}

std::vector<std::string> KnowledgeGraph::unique_targets() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const Triplet& t : triplets_) {
        if (seen.insert(ascii_lower(t.target)).second) out.push_back(t.target);
    }
    return out;
}

std::vector<std::string> KnowledgeGraph::unique_relations() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const Triplet& t : triplets_) {
        if (seen.insert(t.relation).second) out.push_back(t.relation);
    }
    return out;
}

KnowledgeGraph load_kg(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open knowledge graph file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading knowledge graph file: " + path.string());
    std::string content = buffer.str();

    // Strip a UTF-8 BOM if present.
    if (content.size() >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        content.erase(0, 3);
    }

    std::vector<Triplet> triplets;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view line(content.data() + pos, eol - pos);
        ++line_no;
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || trim(line).empty()) {
            if (eol == content.size()) break;
            continue;
        }
        if (line.front() == '#') {
            if (eol == content.size()) break;
            continue;
        }

        std::vector<std::string> fields;
        std::size_t field_start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == '\t') {
                fields.emplace_back(trim(line.substr(field_start, i - field_start)));
                field_start = i + 1;
            }
        }
        if (fields.size() != 3) {
            throw ParseError("expected 3 tab-separated fields, got " +
                             std::to_string(fields.size()) + " at line " + std::to_string(line_no));
        }
        Triplet t{std::move(fields[0]), std::move(fields[1]), std::move(fields[2])};
        validate_triplet(t, line_no);
        triplets.push_back(std::move(t));
        if (eol == content.size()) break;
    }
    return KnowledgeGraph::from_triplets(std::move(triplets));
}

std::vector<Triplet> triplets_from_source(const KnowledgeGraph& kg, std::string_view entity) {
    return kg.triplets_from_source(entity);
}

std::size_t duplicate_triplet_count(const KnowledgeGraph& kg) {
    std::unordered_set<std::string> seen;
    std::size_t duplicates = 0;
    for (const Triplet& t : kg.triplets()) {
        std::string key = t.source + '\t' + t.relation + '\t' + t.target;
        if (!seen.insert(std::move(key)).second) ++duplicates;
    }
    return duplicates;
}

}  // namespace factcheck
