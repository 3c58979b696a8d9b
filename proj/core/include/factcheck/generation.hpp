#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/dataset.hpp"
#include "factcheck/kg.hpp"

namespace factcheck {

enum class GenTaskKind { entailment, neutral, contradiction, paraphrase };

std::string_view gen_task_name(GenTaskKind kind);

// Prompt template with {s} (input sentence), {n} (sentence count) and {l}
// (max words) placeholders. Label kinds require all three; paraphrase
// requires {s} and {l}.
struct GenTemplate {
    GenTaskKind kind = GenTaskKind::entailment;
    std::string text;

    void validate() const;  // throws ParseError on a missing placeholder
};

// The four stock prompts used by the generation workflow (Indonesian).
std::vector<GenTemplate> default_templates();

std::string render_template(const GenTemplate& tpl, std::string_view sentence, std::size_t n,
                            std::size_t max_words);

// Lines of the form "1. text" (ASCII digits, a dot, then the sentence).
// Anything else is ignored.
std::vector<std::string> parse_numbered_list(std::string_view response);

struct GenConfig {
    std::size_t n_paraphrases = 3;
    std::size_t n_hypotheses = 5;
    std::size_t max_words = 20;
    std::string api_url;    // e.g. http://host:port/v1/chat/completions
    std::string api_model;  // remote model name
    std::string api_key;    // read from FACTGEN_API_KEY by the CLI
    std::size_t max_retries = 3;  // retries after the first attempt
    std::size_t backoff_ms = 250;
    std::string audit_path;  // JSONL request/response log; empty disables
};

struct ChatMessage {
    std::string role;
    std::string content;
};

// Transport seam: production uses HttpChatClient, tests inject a mock.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    // Returns the assistant message content. Throws IoError on transport
    // failure and ParseError when the response envelope is unusable.
    virtual std::string complete(const std::vector<ChatMessage>& messages) = 0;
};

// Minimal chat-completion client: POSTs {model, messages:[{role,content}]}
// with a bearer token and reads choices[0].message.content.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(const GenConfig& config);  // validates url/key
    std::string complete(const std::vector<ChatMessage>& messages) override;

private:
    std::string scheme_host_;
    std::string path_;
    std::string api_model_;
    std::string api_key_;
};

struct GenerateStats {
    std::size_t requests = 0;
    std::size_t skipped = 0;  // unusable responses
    std::size_t parsed_examples = 0;
    std::size_t removed_duplicates = 0;
};

// Remote workflow: each premise is paraphrased n_paraphrases times; every
// paraphrased premise gets one prompt per label-kind template asking for
// n_hypotheses numbered sentences; numbered lines become labeled examples.
// Unusable responses are logged and skipped; transport failures are retried
// per the config and then rethrown. Duplicates are removed at the end.
LabeledDataset generate_remote(const std::vector<std::string>& premises,
                               const std::vector<GenTemplate>& templates, const GenConfig& config,
                               ChatClient& client, GenerateStats* stats = nullptr);

// Offline synthetic task whose labels are decidable only through the graph:
//   entailment    - the hypothesis verbalizes a sampled triplet;
//   contradiction - same source and relation, but a target the graph never
//                   relates to that source via that relation;
//   neutral       - the hypothesis subject is an entity absent from the
//                   graph, so its fact paragraph is empty.
// Premises come from a fixed pool of filler sentences shared by all labels.
// Output is balanced (n_per_label each, interleaved) and deterministic in
// (kg, n_per_label, seed).
LabeledDataset generate_kg_grounded(const KnowledgeGraph& kg, std::size_t n_per_label,
                                    std::uint64_t seed);

}  // namespace factcheck
