#pragma once

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/kg.hpp"
#include "factcheck/knowledge.hpp"

namespace testutil {

// Unique path under the system temp directory; removed on destruction.
class TempFile {
public:
    explicit TempFile(std::string_view suffix = ".tmp") {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("factcheck_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                 std::string(suffix));
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// The two-triplet graph behind the canonical retrieval fixture.
inline factcheck::KnowledgeGraph table2_kg() {
    return factcheck::KnowledgeGraph::from_triplets({
        {"covid-19", "DISEBABKAN_OLEH", "sars-cov-2"},
        {"covid-19", "MEMILIKI_GEJALA", "batuk"},
    });
}

inline const char* table2_kg_tsv() {
    return "covid-19\tDISEBABKAN_OLEH\tsars-cov-2\ncovid-19\tMEMILIKI_GEJALA\tbatuk\n";
}

inline const factcheck::StopwordList& shipped_stopwords() {
    static const factcheck::StopwordList list =
        factcheck::load_stopwords(std::filesystem::path(FACTCHECK_DATA_DIR) / "stopwords_id.txt");
    return list;
}

}  // namespace testutil
