#include "factcheck/knowledge.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include "factcheck/errors.hpp"
#include "factcheck/tokenize.hpp"

namespace factcheck {

namespace {

bool has_internal_whitespace(std::string_view word) {
    return word.find_first_of(" \t\v\f\r\n") != std::string_view::npos;
}

constexpr const char* kDefaultIndonesianStopwords[] = {
    "ada",      "adalah",   "agar",     "akan",    "antara",  "atau",
    "bagi",     "bahwa",    "banyak",   "belum",   "bisa",    "bukan",
    "dalam",    "dan",      "dapat",    "dari",    "dengan",  "di",
    "dia",      "harus",    "hingga",   "ia",      "ialah",   "ini",
    "itu",      "jika",     "juga",     "kalau",   "kami",    "kamu",
    "karena",   "ke",       "kepada",   "ketika",  "kita",    "lagi",
    "lebih",    "maka",     "masih",    "melalui", "mereka",  "merupakan",
    "namun",    "oleh",     "pada",     "para",    "pernah",  "pun",
    "saat",     "saja",     "sampai",   "sangat",  "saya",    "sebagai",
    "sebelum",  "sebuah",   "secara",   "sedang",  "sehingga", "sejak",
    "selalu",   "selama",   "semua",    "seperti", "serta",   "setelah",
    "setiap",   "suatu",    "sudah",    "supaya",  "tak",     "telah",
    "tentang",  "terhadap", "tersebut", "tetapi",  "tidak",   "untuk",
    "yaitu",    "yakni",    "yang",
};

}  // namespace

StopwordList::StopwordList(const std::vector<std::string>& words) {
    for (const std::string& raw : words) {
        const std::string word = ascii_lower(trim(raw));
        if (word.empty()) throw ParseError("empty stopword entry");
        if (has_internal_whitespace(word)) {
            throw ParseError("stopword contains whitespace: '" + word + "'");
        }
        words_.insert(word);
    }
}

const StopwordList& StopwordList::default_indonesian() {
    static const StopwordList list{[] {
        std::vector<std::string> words;
        for (const char* w : kDefaultIndonesianStopwords) words.emplace_back(w);
        return words;
    }()};
    return list;
}

std::vector<std::string> StopwordList::sorted_words() const {
    std::vector<std::string> out(words_.begin(), words_.end());
    std::sort(out.begin(), out.end());
    return out;
}

StopwordList load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open stopword file: " + path.string());
    std::vector<std::string> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string entry = trim(line);
        if (entry.empty() || entry.front() == '#') continue;
        if (has_internal_whitespace(entry)) {
            throw ParseError("stopword contains whitespace at line " + std::to_string(line_no));
        }
        words.push_back(entry);
    }
    if (in.bad()) throw IoError("failed reading stopword file: " + path.string());
    return StopwordList(words);
}

std::vector<std::string> preprocess_query(std::string_view text, const StopwordList& stopwords) {
    std::vector<std::string> words;
    for (std::string& token : tokenize(text)) {
        if (!stopwords.contains(token)) words.push_back(std::move(token));
    }
    return words;
}

std::vector<std::string> match_entities(const std::vector<std::string>& words,
                                        const KnowledgeGraph& kg) {
    std::vector<std::string> entities;
    std::unordered_set<std::string> seen;
    for (const std::string& word : words) {
        if (kg.has_source(word) && seen.insert(word).second) {
            entities.push_back(word);
        }
    }
    return entities;
}

std::vector<Triplet> retrieve_triplets(const std::vector<std::string>& entities,
                                       const KnowledgeGraph& kg) {
    std::vector<Triplet> triplets;
    for (const std::string& entity : entities) {
        for (Triplet& t : kg.triplets_from_source(entity)) {
            triplets.push_back(std::move(t));
        }
    }
    return triplets;
}

std::string verbalize_triplet(const Triplet& t) {
    std::string relation = ascii_lower(t.relation);
    std::replace(relation.begin(), relation.end(), '_', ' ');
    return t.source + ' ' + relation + ' ' + t.target;
}

std::string build_fact_paragraph(const std::vector<std::string>& sentences) {
    if (sentences.empty()) return {};
    std::string paragraph;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        std::string sentence = sentences[i];
        if (i > 0) {
            paragraph += ". ";
            if (!sentence.empty() && sentence.front() >= 'a' && sentence.front() <= 'z') {
                sentence.front() = static_cast<char>(sentence.front() - 'a' + 'A');
            }
        }
        paragraph += sentence;
    }
    paragraph += '.';
    return paragraph;
}

FactParagraph facts_for_hypothesis(std::string_view hypothesis, const KnowledgeGraph& kg,
                                   const StopwordList& stopwords, const FactOptions& options) {
    const std::vector<std::string> words = preprocess_query(hypothesis, stopwords);
    const std::vector<std::string> entities = match_entities(words, kg);
    std::vector<Triplet> triplets = retrieve_triplets(entities, kg);

    if (options.dedupe_triplets) {
        std::vector<Triplet> unique;
        for (Triplet& t : triplets) {
            if (std::find(unique.begin(), unique.end(), t) == unique.end()) {
                unique.push_back(std::move(t));
            }
        }
        triplets = std::move(unique);
    }

    FactParagraph out;
    out.provenance = std::move(triplets);
    out.sentences.reserve(out.provenance.size());
    for (const Triplet& t : out.provenance) out.sentences.push_back(verbalize_triplet(t));
    out.text = build_fact_paragraph(out.sentences);
    return out;
}

}  // namespace factcheck
