#include "factcheck/generation.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

#include "factcheck/errors.hpp"
#include "factcheck/knowledge.hpp"
#include "factcheck/rng.hpp"
#include "factcheck/tokenize.hpp"

namespace factcheck {

namespace {

using nlohmann::ordered_json;

void replace_all(std::string& text, std::string_view needle, std::string_view replacement) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), replacement);
        pos += replacement.size();
    }
}

}  // namespace

std::string_view gen_task_name(GenTaskKind kind) {
    switch (kind) {
        case GenTaskKind::entailment: return "entailment";
        case GenTaskKind::neutral: return "neutral";
        case GenTaskKind::contradiction: return "contradiction";
        case GenTaskKind::paraphrase: return "paraphrase";
    }
    return "entailment";
}

void GenTemplate::validate() const {
    const bool needs_n = kind != GenTaskKind::paraphrase;
    if (text.find("{s}") == std::string::npos) {
        throw ParseError("template for " + std::string(gen_task_name(kind)) + " is missing {s}");
    }
    if (text.find("{l}") == std::string::npos) {
        throw ParseError("template for " + std::string(gen_task_name(kind)) + " is missing {l}");
    }
    if (needs_n && text.find("{n}") == std::string::npos) {
        throw ParseError("template for " + std::string(gen_task_name(kind)) + " is missing {n}");
    }
}

std::vector<GenTemplate> default_templates() {
    return {
        {GenTaskKind::entailment,
         "Buatkan daftar (1,2,3,...) {n} kalimat yang berhubungan dengan pernyataan '{s}' tidak "
         "lebih dari {l} kata berbahasa Indonesia menggunakan EYD! Kalimat tidak mengandung unsur "
         "organisasi, politik, nama tokoh, dan SARA!"},
        {GenTaskKind::neutral,
         "Buatkan daftar (1,2,3,...) {n} kalimat yang netral (tidak berhubungan) dengan pernyataan "
         "'{s}' tidak lebih dari {l} kata berbahasa Indonesia menggunakan EYD! Kalimat tidak "
         "mengandung unsur organisasi, politik, nama tokoh, dan SARA!"},
        {GenTaskKind::contradiction,
         "Buatkan daftar (1,2,3,...) {n} kalimat yang bertentangan dengan pernyataan '{s}' tidak "
         "lebih dari {l} kata berbahasa Indonesia menggunakan EYD! Kalimat tidak mengandung unsur "
         "organisasi, politik, nama tokoh, dan SARA!"},
        {GenTaskKind::paraphrase,
         "Parafrase menjadi kalimat berita untuk awam maksimal {l} kata yang tidak boleh sama "
         "persis ataupun sebagian dengan hasil parafrase sebelumnya.: '{s}'"},
    };
}

std::string render_template(const GenTemplate& tpl, std::string_view sentence, std::size_t n,
                            std::size_t max_words) {
    tpl.validate();
    std::string out = tpl.text;
    replace_all(out, "{s}", sentence);
    replace_all(out, "{n}", std::to_string(n));
    replace_all(out, "{l}", std::to_string(max_words));
    return out;
}

std::vector<std::string> parse_numbered_list(std::string_view response) {
    std::vector<std::string> items;
    std::size_t pos = 0;
    while (pos <= response.size()) {
        std::size_t eol = response.find('\n', pos);
        if (eol == std::string_view::npos) eol = response.size();
        std::string_view line = response.substr(pos, eol - pos);
        pos = eol + 1;

        std::size_t i = 0;
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t digits = i;
        while (digits < line.size() && line[digits] >= '0' && line[digits] <= '9') ++digits;
        if (digits == i || digits >= line.size() || line[digits] != '.') {
            if (eol == response.size()) break;
            continue;
        }
        const std::string item = trim(line.substr(digits + 1));
        if (!item.empty()) items.push_back(item);
        if (eol == response.size()) break;
    }
    return items;
}

// ---- HTTP transport ----------------------------------------------------

HttpChatClient::HttpChatClient(const GenConfig& config)
    : api_model_(config.api_model), api_key_(config.api_key) {
    if (config.api_url.empty()) throw std::invalid_argument("missing API url (--api-url)");
    if (api_key_.empty()) {
        throw std::invalid_argument("missing API key (set FACTGEN_API_KEY)");
    }
    const std::size_t scheme_end = config.api_url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("API url must include a scheme: " + config.api_url);
    }
    const std::size_t path_start = config.api_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host_ = config.api_url;
        path_ = "/";
    } else {
        scheme_host_ = config.api_url.substr(0, path_start);
        path_ = config.api_url.substr(path_start);
    }
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages) {
    ordered_json body;
    body["model"] = api_model_;
    body["messages"] = ordered_json::array();
    for (const ChatMessage& m : messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }

    httplib::Client client(scheme_host_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    const httplib::Result res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
        throw IoError("request to " + scheme_host_ + path_ + " failed: " +
                      httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw IoError("request to " + scheme_host_ + path_ + " returned HTTP " +
                      std::to_string(res->status));
    }

    try {
        const ordered_json doc = ordered_json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("unexpected chat completion envelope: ") + e.what());
    }
}

// ---- remote generation workflow -----------------------------------------

namespace {

class AuditLog {
public:
    explicit AuditLog(const std::string& path) {
        if (!path.empty()) {
            out_.open(path, std::ios::binary | std::ios::app);
            if (!out_) throw IoError("cannot open audit log: " + path);
        }
    }

    void record(std::string_view kind, std::string_view prompt, std::string_view payload) {
        if (!out_.is_open()) return;
        ordered_json entry;
        entry["timestamp"] = static_cast<std::int64_t>(
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
        entry["kind"] = std::string(kind);
        entry["request"] = std::string(prompt);
        entry["response"] = std::string(payload);
        out_ << entry.dump() << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
};

std::string complete_with_retry(ChatClient& client, const std::string& prompt,
                                const GenConfig& config, GenerateStats& stats) {
    for (std::size_t attempt = 0;; ++attempt) {
        try {
            ++stats.requests;
            return client.complete({{"user", prompt}});
        } catch (const IoError&) {
            if (attempt >= config.max_retries) throw;
            if (config.backoff_ms > 0) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(config.backoff_ms * (attempt + 1)));
            }
        }
    }
}

}  // namespace

LabeledDataset generate_remote(const std::vector<std::string>& premises,
                               const std::vector<GenTemplate>& templates, const GenConfig& config,
                               ChatClient& client, GenerateStats* stats_out) {
    if (config.n_paraphrases < 1 || config.n_hypotheses < 1 || config.max_words < 1) {
        throw std::invalid_argument("generate_remote: counts must be >= 1");
    }
    for (const GenTemplate& tpl : templates) tpl.validate();

    const GenTemplate* paraphrase_tpl = nullptr;
    std::vector<const GenTemplate*> label_templates;
    for (const GenTemplate& tpl : templates) {
        if (tpl.kind == GenTaskKind::paraphrase) {
            paraphrase_tpl = &tpl;
        } else {
            label_templates.push_back(&tpl);
        }
    }
    if (paraphrase_tpl == nullptr) {
        throw std::invalid_argument("generate_remote: no paraphrase template");
    }
    if (label_templates.empty()) {
        throw std::invalid_argument("generate_remote: no label templates");
    }

    GenerateStats stats;
    AuditLog audit(config.audit_path);
    LabeledDataset dataset;
    dataset.provenance = DatasetProvenance::generated;

    for (const std::string& premise : premises) {
        std::vector<std::string> paraphrased;
        for (std::size_t k = 0; k < config.n_paraphrases; ++k) {
            const std::string prompt =
                render_template(*paraphrase_tpl, premise, config.n_hypotheses, config.max_words);
            try {
                const std::string response = complete_with_retry(client, prompt, config, stats);
                audit.record("paraphrase", prompt, response);
                const std::string text = trim(response);
                if (text.empty()) {
                    ++stats.skipped;
                } else {
                    paraphrased.push_back(text);
                }
            } catch (const ParseError& e) {
                audit.record("paraphrase-error", prompt, e.what());
                ++stats.skipped;
            }
        }

        for (const std::string& new_premise : paraphrased) {
            for (const GenTemplate* tpl : label_templates) {
                const std::string prompt =
                    render_template(*tpl, new_premise, config.n_hypotheses, config.max_words);
                std::string response;
                try {
                    response = complete_with_retry(client, prompt, config, stats);
                } catch (const ParseError& e) {
                    audit.record("hypothesis-error", prompt, e.what());
                    ++stats.skipped;
                    continue;
                }
                audit.record(gen_task_name(tpl->kind), prompt, response);
                const std::vector<std::string> hypotheses = parse_numbered_list(response);
                if (hypotheses.empty()) {
                    ++stats.skipped;
                    continue;
                }
                const Label label = label_from_string(gen_task_name(tpl->kind));
                for (const std::string& hypothesis : hypotheses) {
                    dataset.examples.push_back(Example{new_premise, hypothesis, label});
                    ++stats.parsed_examples;
                }
            }
        }
    }

    DedupResult deduped = dedup(dataset);
    stats.removed_duplicates = deduped.removed;
    deduped.dataset.provenance = DatasetProvenance::generated;
    if (stats_out != nullptr) *stats_out = stats;
    return std::move(deduped.dataset);
}

// ---- offline KG-grounded generator --------------------------------------

namespace {

// Generic filler premises; deliberately uninformative and label-independent.
constexpr const char* kFillerPremises[] = {
    "Informasi lengkap masih dikumpulkan tim peninjau lapangan.",
    "Laporan resmi akan diterbitkan setelah proses verifikasi selesai.",
    "Catatan arsip menyimpan berbagai keterangan pendukung.",
    "Ringkasan temuan sementara belum tersedia bagi publik.",
    "Petugas sedang menyusun dokumentasi hasil pemeriksaan rutin.",
    "Berkas pendukung tersimpan rapi dalam sistem arsip pusat.",
    "Pembaruan berikutnya dijadwalkan setelah rapat koordinasi.",
    "Penjelasan tambahan dicantumkan dalam lampiran dokumen kerja.",
};

bool any_word_is_source(std::string_view text, const KnowledgeGraph& kg) {
    for (const std::string& word : tokenize(text)) {
        if (kg.has_source(word)) return true;
    }
    return false;
}

std::string humanized_relation(const std::string& relation) {
    std::string out = ascii_lower(relation);
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

}  // namespace

LabeledDataset generate_kg_grounded(const KnowledgeGraph& kg, std::size_t n_per_label,
                                    std::uint64_t seed) {
    if (kg.empty()) throw std::invalid_argument("generate_kg_grounded: empty knowledge graph");
    if (n_per_label < 1) throw std::invalid_argument("generate_kg_grounded: n_per_label must be >= 1");

    const std::vector<std::string> all_targets = kg.unique_targets();
    const std::vector<std::string> all_relations = kg.unique_relations();

    // Pools for neutral hypotheses: no word may match a source entity, or the
    // paragraph would not be empty.
    std::vector<std::string> neutral_relations;
    for (const std::string& r : all_relations) {
        if (!any_word_is_source(humanized_relation(r), kg)) neutral_relations.push_back(r);
    }
    std::vector<std::string> neutral_targets;
    for (const std::string& t : all_targets) {
        if (!any_word_is_source(t, kg)) neutral_targets.push_back(t);
    }
    if (neutral_relations.empty() || neutral_targets.empty()) {
        throw std::invalid_argument(
            "generate_kg_grounded: every relation or target collides with a source entity; "
            "cannot build neutral hypotheses");
    }

    // Lowercased entity labels, for picking subjects absent from the graph.
    std::unordered_set<std::string> known_entities;
    for (const Triplet& t : kg.triplets()) {
        known_entities.insert(ascii_lower(t.source));
        known_entities.insert(ascii_lower(t.target));
    }

    SeededRng rng(seed);
    LabeledDataset dataset;
    dataset.provenance = DatasetProvenance::generated;
    dataset.examples.reserve(3 * n_per_label);

    const auto filler = [&]() -> std::string {
        return kFillerPremises[rng.uniform_index(std::size(kFillerPremises))];
    };

    std::size_t fresh_counter = 0;
    for (std::size_t i = 0; i < n_per_label; ++i) {
        // entailment: a true triplet, verbalized.
        const Triplet& true_triplet = kg.triplets()[rng.uniform_index(kg.size())];
        dataset.examples.push_back(
            Example{filler(), verbalize_triplet(true_triplet), Label::entailment});

        // contradiction: same source and relation, a target never related to
        // that source by that relation.
        const Triplet& base = kg.triplets()[rng.uniform_index(kg.size())];
        std::unordered_set<std::string> related;
        for (const std::size_t pos : *kg.positions_for_source(ascii_lower(base.source))) {
            const Triplet& t = kg.triplets()[pos];
            if (t.relation == base.relation) related.insert(ascii_lower(t.target));
        }
        std::vector<const std::string*> candidates;
        for (const std::string& target : all_targets) {
            if (related.count(ascii_lower(target)) == 0) candidates.push_back(&target);
        }
        if (candidates.empty()) {
            throw std::invalid_argument(
                "generate_kg_grounded: knowledge graph too small to sample contradictions "
                "(needs at least 2 distinct targets per relation domain)");
        }
        const std::string& wrong_target = *candidates[rng.uniform_index(candidates.size())];
        dataset.examples.push_back(
            Example{filler(), verbalize_triplet({base.source, base.relation, wrong_target}),
                    Label::contradiction});

        // neutral: a subject the graph knows nothing about.
        std::string subject;
        do {
            subject = "entitas-" + std::to_string(++fresh_counter);
        } while (known_entities.count(subject) > 0);
        const std::string& relation = neutral_relations[rng.uniform_index(neutral_relations.size())];
        const std::string& target = neutral_targets[rng.uniform_index(neutral_targets.size())];
        dataset.examples.push_back(Example{
            filler(), subject + ' ' + humanized_relation(relation) + ' ' + target, Label::neutral});
    }
    return dataset;
}

}  // namespace factcheck
