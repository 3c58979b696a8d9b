// factcheck: command-line driver for the KG-augmented NLI pipeline.
//
// Subcommands: kg-validate, facts, train, eval, compare, dataset
// (split|dedup|gen|gen-kg). Exit codes: 0 success, 1 usage or input
// validation error, 2 runtime error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "factcheck/dataset.hpp"
#include "factcheck/errors.hpp"
#include "factcheck/evaluation.hpp"
#include "factcheck/generation.hpp"
#include "factcheck/kg.hpp"
#include "factcheck/knowledge.hpp"
#include "factcheck/model.hpp"
#include "factcheck/tokenize.hpp"
#include "factcheck/trainer.hpp"

namespace {

using nlohmann::ordered_json;
using namespace factcheck;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

// One report per run: a JSON document under --json, plain text otherwise.
void emit_report(bool as_json, const std::string& command, const ordered_json& config,
                 const ordered_json& result, double elapsed_ms,
                 const std::function<void()>& print_human) {
    if (as_json) {
        ordered_json report;
        report["command"] = command;
        report["config"] = config;
        report["elapsed_ms"] = elapsed_ms;
        report["result"] = result;
        std::cout << report.dump(2) << '\n';
    } else {
        print_human();
    }
}

StopwordList load_stopwords_or_default(const std::string& path) {
    if (path.empty()) return StopwordList::default_indonesian();
    return load_stopwords(path);
}

ordered_json metrics_json(const Metrics& m) {
    ordered_json out;
    out["precision"] = m.precision;
    out["recall"] = m.recall;
    out["accuracy"] = m.accuracy;
    out["f1"] = m.f1;
    out["total"] = m.total;
    out["per_class_true"] = {
        {"entailment", m.per_class_true[0]},
        {"contradiction", m.per_class_true[1]},
        {"neutral", m.per_class_true[2]},
    };
    ordered_json confusion = ordered_json::array();
    for (const auto& row : m.confusion) confusion.push_back(row);
    out["confusion"] = confusion;
    return out;
}

void print_metrics(const Metrics& m, const std::string& heading) {
    if (!heading.empty()) std::cout << heading << '\n';
    std::printf("  precision: %.4f\n  recall:    %.4f\n  accuracy:  %.4f\n  f1:        %.4f\n",
                m.precision, m.recall, m.accuracy, m.f1);
    std::printf("  true predictions: entailment %zu, contradiction %zu, neutral %zu\n",
                m.per_class_true[0], m.per_class_true[1], m.per_class_true[2]);
    std::cout << "  confusion (rows gold, cols predicted):\n";
    for (std::size_t g = 0; g < kNumLabels; ++g) {
        std::printf("    %-13s %6zu %6zu %6zu\n", std::string(label_name(static_cast<Label>(g))).c_str(),
                    m.confusion[g][0], m.confusion[g][1], m.confusion[g][2]);
    }
}

ordered_json history_json(const TrainHistory& history) {
    ordered_json epochs = ordered_json::array();
    for (const EpochRecord& r : history.epochs) {
        ordered_json e;
        e["epoch"] = r.epoch;
        e["train_loss"] = r.train_loss;
        e["val_loss"] = r.val_loss;
        e["precision"] = r.val_metrics.precision;
        e["recall"] = r.val_metrics.recall;
        e["accuracy"] = r.val_metrics.accuracy;
        e["f1"] = r.val_metrics.f1;
        epochs.push_back(std::move(e));
    }
    ordered_json out;
    out["epochs"] = std::move(epochs);
    out["best_epoch"] = history.best_epoch;
    return out;
}

// ---- per-command option structs -----------------------------------------

struct KgValidateOpts {
    std::string kg_path;
    bool json = false;
};

struct FactsOpts {
    std::string kg_path, stopwords_path, text;
    bool verbose = false, dedupe = false, json = false;
};

struct TrainOpts {
    std::string train_path, val_path, kg_path, stopwords_path, out_path, history_path;
    bool baseline = false, finetune_lr = false, json = false;
    std::uint64_t seed = 0;
    double lr = 1e-2;
    std::size_t batch_size = 16, max_epochs = 16, patience = 5;
    std::size_t embed_dim = 32, hidden_dim = 32, max_len_pair = 64, max_len_fact = 64;
    std::size_t min_freq = 2;
};

struct EvalOpts {
    std::string model_path, test_path, kg_path, stopwords_path;
    bool json = false;
};

struct CompareOpts {
    std::string baseline_path, proposed_path, test_path, kg_path, stopwords_path;
    std::size_t block_size = 16;
    bool json = false;
};

struct SplitOpts {
    std::string in_path, out_train, out_val, out_test;
    std::uint64_t seed = 0;
    bool stratified = false, json = false;
};

struct DedupOpts {
    std::string in_path, out_path;
    bool json = false;
};

struct GenOpts {
    std::string premises_path, out_path, api_url, api_model, audit_path;
    std::size_t n_paraphrases = 3, n_hypotheses = 5, max_words = 20;
    std::size_t retries = 3, backoff_ms = 250;
    bool json = false;
};

struct GenKgOpts {
    std::string kg_path, out_path;
    std::size_t n_per_label = 100;
    std::uint64_t seed = 0;
    bool json = false;
};

// ---- command runners ------------------------------------------------------

void run_kg_validate(const KgValidateOpts& opts) {
    Timer timer;
    const KnowledgeGraph kg = load_kg(opts.kg_path);

    std::size_t entity_count = 0;
    {
        std::unordered_set<std::string> entities;
        for (const Triplet& t : kg.triplets()) {
            entities.insert(ascii_lower(t.source));
            entities.insert(ascii_lower(t.target));
        }
        entity_count = entities.size();
    }
    const std::size_t source_count = kg.unique_sources().size();
    const std::size_t duplicates = duplicate_triplet_count(kg);

    ordered_json result;
    result["triplets"] = kg.size();
    result["entities"] = entity_count;
    result["sources"] = source_count;
    result["duplicates"] = duplicates;

    emit_report(opts.json, "kg-validate", {{"kg", opts.kg_path}}, result, timer.elapsed_ms(), [&] {
        std::cout << "loaded " << kg.size() << " triplets (" << entity_count << " entities, "
                  << source_count << " source entities, " << duplicates << " duplicates) from "
                  << opts.kg_path << '\n';
    });
}

void run_facts(const FactsOpts& opts) {
    Timer timer;
    const KnowledgeGraph kg = load_kg(opts.kg_path);
    const StopwordList stopwords = load_stopwords_or_default(opts.stopwords_path);

    const std::vector<std::string> words = preprocess_query(opts.text, stopwords);
    const std::vector<std::string> entities = match_entities(words, kg);
    FactOptions fact_options;
    fact_options.dedupe_triplets = opts.dedupe;
    const FactParagraph facts = facts_for_hypothesis(opts.text, kg, stopwords, fact_options);

    ordered_json result;
    result["paragraph"] = facts.text;
    result["empty"] = facts.empty();
    ordered_json provenance = ordered_json::array();
    for (const Triplet& t : facts.provenance) {
        provenance.push_back({{"source", t.source}, {"relation", t.relation}, {"target", t.target}});
    }
    result["provenance"] = provenance;
    if (opts.verbose) {
        result["words"] = words;
        result["entities"] = entities;
        result["sentences"] = facts.sentences;
    }

    ordered_json config{{"kg", opts.kg_path},
                        {"stopwords", opts.stopwords_path.empty() ? "builtin" : opts.stopwords_path},
                        {"text", opts.text},
                        {"dedupe", opts.dedupe}};
    emit_report(opts.json, "facts", config, result, timer.elapsed_ms(), [&] {
        if (opts.verbose) {
            std::cout << "input:     " << opts.text << '\n';
            std::cout << "words:     ";
            for (std::size_t i = 0; i < words.size(); ++i) std::cout << (i ? " " : "") << words[i];
            std::cout << '\n' << "entities:  ";
            for (std::size_t i = 0; i < entities.size(); ++i)
                std::cout << (i ? " " : "") << entities[i];
            std::cout << '\n' << "triplets:  ";
            for (std::size_t i = 0; i < facts.provenance.size(); ++i) {
                const Triplet& t = facts.provenance[i];
                std::cout << (i ? "; " : "") << '(' << t.source << ", " << t.relation << ", "
                          << t.target << ')';
            }
            std::cout << '\n' << "sentences: ";
            for (std::size_t i = 0; i < facts.sentences.size(); ++i)
                std::cout << (i ? " | " : "") << facts.sentences[i];
            std::cout << '\n' << "paragraph: " << facts.text << '\n';
        } else {
            std::cout << facts.text << '\n';
        }
        if (facts.empty()) std::cout << "(empty fact paragraph)\n";
    });
}

void run_train(const TrainOpts& opts) {
    Timer timer;
    const KnowledgeGraph kg = load_kg(opts.kg_path);
    const StopwordList stopwords = load_stopwords_or_default(opts.stopwords_path);
    const LabeledDataset train_set = load_dataset(opts.train_path);
    const LabeledDataset val_set = load_dataset(opts.val_path);

    std::vector<std::string> corpus;
    corpus.reserve(2 * train_set.size());
    for (const Example& e : train_set.examples) {
        corpus.push_back(e.premise);
        corpus.push_back(e.hypothesis);
    }
    const Vocabulary vocab = build_vocab(corpus, opts.min_freq);

    ModelConfig model_config;
    model_config.embed_dim = opts.embed_dim;
    model_config.hidden_dim = opts.hidden_dim;
    model_config.max_len_pair = opts.max_len_pair;
    model_config.max_len_fact = opts.max_len_fact;

    TrainConfig train_config;
    train_config.learning_rate = opts.finetune_lr ? TrainConfig::kFineTuneLearningRate : opts.lr;
    train_config.batch_size = opts.batch_size;
    train_config.max_epochs = opts.max_epochs;
    train_config.patience = opts.patience;
    train_config.seed = opts.seed;

    SeededRng init_rng(opts.seed);
    const Model initial = make_model(opts.baseline ? ModelVariant::baseline : ModelVariant::proposed,
                                     vocab, model_config, init_rng);
    const TrainResult trained = train(initial, train_set, val_set, kg, stopwords, train_config);

    save_checkpoint(trained.model, opts.out_path);
    const std::string history_path =
        opts.history_path.empty() ? opts.out_path + ".history.json" : opts.history_path;
    {
        std::ofstream out(history_path, std::ios::binary);
        if (!out) throw IoError("cannot write history file: " + history_path);
        out << history_json(trained.history).dump(2) << '\n';
    }

    ordered_json config{{"train", opts.train_path},
                        {"val", opts.val_path},
                        {"kg", opts.kg_path},
                        {"variant", opts.baseline ? "baseline" : "proposed"},
                        {"seed", opts.seed},
                        {"learning_rate", train_config.learning_rate},
                        {"batch_size", opts.batch_size},
                        {"max_epochs", opts.max_epochs},
                        {"patience", opts.patience},
                        {"embed_dim", opts.embed_dim},
                        {"hidden_dim", opts.hidden_dim},
                        {"max_len_pair", opts.max_len_pair},
                        {"max_len_fact", opts.max_len_fact},
                        {"min_freq", opts.min_freq}};
    ordered_json result = history_json(trained.history);
    result["vocab_size"] = vocab.size();
    result["checkpoint"] = opts.out_path;
    result["history_file"] = history_path;

    emit_report(opts.json, "train", config, result, timer.elapsed_ms(), [&] {
        std::printf("%-6s %-8s %-10s %-8s %-9s %-8s\n", "epoch", "loss", "precision", "recall",
                    "accuracy", "f1");
        for (const EpochRecord& r : trained.history.epochs) {
            std::printf("%-6zu %-8.4f %-10.4f %-8.4f %-9.4f %-8.4f\n", r.epoch, r.val_loss,
                        r.val_metrics.precision, r.val_metrics.recall, r.val_metrics.accuracy,
                        r.val_metrics.f1);
        }
        std::cout << "best epoch: " << trained.history.best_epoch << '\n';
        std::cout << "checkpoint: " << opts.out_path << '\n';
        std::cout << "history:    " << history_path << '\n';
    });
}

void run_eval(const EvalOpts& opts) {
    Timer timer;
    const Model model = load_checkpoint(opts.model_path);
    const KnowledgeGraph kg = load_kg(opts.kg_path);
    const StopwordList stopwords = load_stopwords_or_default(opts.stopwords_path);
    const LabeledDataset test_set = load_dataset(opts.test_path);

    const Metrics metrics = evaluate(model, test_set, kg, stopwords);

    ordered_json config{{"model", opts.model_path},
                        {"test", opts.test_path},
                        {"kg", opts.kg_path},
                        {"variant", std::string(variant_name(model.variant))}};
    ordered_json result;
    result["variant"] = std::string(variant_name(model.variant));
    result["metrics"] = metrics_json(metrics);

    emit_report(opts.json, "eval", config, result, timer.elapsed_ms(), [&] {
        print_metrics(metrics, "test metrics (" + std::string(variant_name(model.variant)) + ")");
    });
}

void run_compare(const CompareOpts& opts) {
    Timer timer;
    const Model baseline = load_checkpoint(opts.baseline_path);
    const Model proposed = load_checkpoint(opts.proposed_path);
    const KnowledgeGraph kg = load_kg(opts.kg_path);
    const StopwordList stopwords = load_stopwords_or_default(opts.stopwords_path);
    const LabeledDataset test_set = load_dataset(opts.test_path);

    std::vector<std::string> warnings;
    if (baseline.variant != ModelVariant::baseline) {
        warnings.push_back("--baseline checkpoint has variant '" +
                           std::string(variant_name(baseline.variant)) + "'");
    }
    if (proposed.variant != ModelVariant::proposed) {
        warnings.push_back("--proposed checkpoint has variant '" +
                           std::string(variant_name(proposed.variant)) + "'");
    }
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

    const ComparisonResult comparison =
        compare_models(baseline, proposed, test_set, kg, stopwords, opts.block_size);
    const bool significant = comparison.wilcoxon.p_value < 0.05;

    ordered_json result;
    result["baseline"] = metrics_json(comparison.baseline);
    result["proposed"] = metrics_json(comparison.proposed);
    result["block_size"] = comparison.block_size;
    result["n_blocks"] = comparison.proposed_block_accuracy.size();
    result["wilcoxon"] = {{"n_effective", comparison.wilcoxon.n_effective},
                          {"w", comparison.wilcoxon.w_statistic},
                          {"w_plus", comparison.wilcoxon.w_plus},
                          {"w_minus", comparison.wilcoxon.w_minus},
                          {"p_value", comparison.wilcoxon.p_value},
                          {"exact", comparison.wilcoxon.exact},
                          {"significant_at_0.05", significant}};
    result["warnings"] = warnings;

    ordered_json config{{"baseline", opts.baseline_path},
                        {"proposed", opts.proposed_path},
                        {"test", opts.test_path},
                        {"kg", opts.kg_path},
                        {"block_size", opts.block_size}};
    emit_report(opts.json, "compare", config, result, timer.elapsed_ms(), [&] {
        print_metrics(comparison.baseline, "baseline");
        print_metrics(comparison.proposed, "proposed");
        std::printf("wilcoxon signed-rank over %zu blocks of %zu (paired accuracies):\n",
                    comparison.proposed_block_accuracy.size(), comparison.block_size);
        std::printf("  n_effective = %zu, W = %.2f, p = %.6g (%s)\n", comparison.wilcoxon.n_effective,
                    comparison.wilcoxon.w_statistic, comparison.wilcoxon.p_value,
                    comparison.wilcoxon.exact ? "exact" : "normal approximation");
        std::cout << (significant ? "significant at alpha=0.05\n" : "not significant at alpha=0.05\n");
    });
}

void run_split(const SplitOpts& opts) {
    Timer timer;
    const LabeledDataset dataset = load_dataset(opts.in_path);
    const SplitResult parts = split(dataset, opts.seed, opts.stratified);
    save_dataset(parts.train, opts.out_train);
    save_dataset(parts.val, opts.out_val);
    save_dataset(parts.test, opts.out_test);

    ordered_json result{{"total", dataset.size()},
                        {"train", parts.train.size()},
                        {"val", parts.val.size()},
                        {"test", parts.test.size()},
                        {"files", {opts.out_train, opts.out_val, opts.out_test}}};
    ordered_json config{{"in", opts.in_path}, {"seed", opts.seed}, {"stratified", opts.stratified}};
    emit_report(opts.json, "dataset split", config, result, timer.elapsed_ms(), [&] {
        std::cout << "split " << dataset.size() << " examples into train " << parts.train.size()
                  << " / val " << parts.val.size() << " / test " << parts.test.size() << '\n';
    });
}

void run_dedup(const DedupOpts& opts) {
    Timer timer;
    const LabeledDataset dataset = load_dataset(opts.in_path);
    const DedupResult deduped = dedup(dataset);
    save_dataset(deduped.dataset, opts.out_path);

    ordered_json result{{"input", dataset.size()},
                        {"kept", deduped.dataset.size()},
                        {"removed", deduped.removed},
                        {"label_conflicts", deduped.label_conflicts}};
    emit_report(opts.json, "dataset dedup", {{"in", opts.in_path}, {"out", opts.out_path}}, result,
                timer.elapsed_ms(), [&] {
                    std::cout << "kept " << deduped.dataset.size() << " of " << dataset.size()
                              << " examples (" << deduped.removed << " duplicates removed, "
                              << deduped.label_conflicts << " label conflicts)\n";
                });
}

void run_gen(const GenOpts& opts) {
    Timer timer;
    std::vector<std::string> premises;
    {
        std::ifstream in(opts.premises_path, std::ios::binary);
        if (!in) throw IoError("cannot open premises file: " + opts.premises_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const std::string premise = trim(line);
            if (premise.empty() || premise.front() == '#') continue;
            premises.push_back(premise);
        }
    }

    GenConfig config;
    config.n_paraphrases = opts.n_paraphrases;
    config.n_hypotheses = opts.n_hypotheses;
    config.max_words = opts.max_words;
    config.api_url = opts.api_url;
    config.api_model = opts.api_model;
    config.max_retries = opts.retries;
    config.backoff_ms = opts.backoff_ms;
    config.audit_path = opts.audit_path;
    if (const char* key = std::getenv("FACTGEN_API_KEY")) config.api_key = key;

    HttpChatClient client(config);
    GenerateStats stats;
    const LabeledDataset dataset =
        generate_remote(premises, default_templates(), config, client, &stats);
    save_dataset(dataset, opts.out_path);

    ordered_json result{{"premises", premises.size()},     {"requests", stats.requests},
                        {"skipped", stats.skipped},        {"examples", dataset.size()},
                        {"removed_duplicates", stats.removed_duplicates},
                        {"output", opts.out_path}};
    ordered_json config_echo{{"premises", opts.premises_path},
                             {"api_url", opts.api_url},
                             {"api_model", opts.api_model},
                             {"n_paraphrases", opts.n_paraphrases},
                             {"n_hypotheses", opts.n_hypotheses},
                             {"max_words", opts.max_words},
                             {"retries", opts.retries}};
    emit_report(opts.json, "dataset gen", config_echo, result, timer.elapsed_ms(), [&] {
        std::cout << "generated " << dataset.size() << " examples from " << premises.size()
                  << " premises (" << stats.requests << " requests, " << stats.skipped
                  << " skipped, " << stats.removed_duplicates << " duplicates removed)\n"
                  << "output: " << opts.out_path << '\n';
    });
}

void run_gen_kg(const GenKgOpts& opts) {
    Timer timer;
    const KnowledgeGraph kg = load_kg(opts.kg_path);
    const LabeledDataset dataset = generate_kg_grounded(kg, opts.n_per_label, opts.seed);
    save_dataset(dataset, opts.out_path);

    ordered_json result{{"n_per_label", opts.n_per_label},
                        {"total", dataset.size()},
                        {"output", opts.out_path}};
    ordered_json config{{"kg", opts.kg_path}, {"n_per_label", opts.n_per_label}, {"seed", opts.seed}};
    emit_report(opts.json, "dataset gen-kg", config, result, timer.elapsed_ms(), [&] {
        std::cout << "generated " << dataset.size() << " examples (" << opts.n_per_label
                  << " per label) into " << opts.out_path << '\n';
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-graph-augmented NLI fact-checking pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Optional key=value config file; explicit flags win");

    KgValidateOpts kgv;
    auto* kg_validate = app.add_subcommand("kg-validate", "Load and validate a knowledge graph");
    kg_validate->add_option("--kg", kgv.kg_path, "Knowledge graph TSV")->required();
    kg_validate->add_flag("--json", kgv.json, "Emit a JSON report");

    FactsOpts facts;
    auto* facts_cmd = app.add_subcommand("facts", "Retrieve the fact paragraph for a hypothesis");
    facts_cmd->add_option("--kg", facts.kg_path, "Knowledge graph TSV")->required();
    facts_cmd->add_option("--stopwords", facts.stopwords_path, "Stopword file (default: builtin)");
    facts_cmd->add_option("--text", facts.text, "Hypothesis sentence")->required();
    facts_cmd->add_flag("--verbose", facts.verbose, "Print every pipeline step");
    facts_cmd->add_flag("--dedupe-facts", facts.dedupe, "Drop repeated triplets");
    facts_cmd->add_flag("--json", facts.json, "Emit a JSON report");

    TrainOpts train_opts;
    auto* train_cmd = app.add_subcommand("train", "Train a model and write a checkpoint");
    train_cmd->add_option("--train", train_opts.train_path, "Training JSONL")->required();
    train_cmd->add_option("--val", train_opts.val_path, "Validation JSONL")->required();
    train_cmd->add_option("--kg", train_opts.kg_path, "Knowledge graph TSV")->required();
    train_cmd->add_option("--stopwords", train_opts.stopwords_path, "Stopword file");
    train_cmd->add_option("--out", train_opts.out_path, "Checkpoint output path")->required();
    train_cmd->add_option("--history", train_opts.history_path,
                          "History JSON path (default: <out>.history.json)");
    train_cmd->add_flag("--baseline", train_opts.baseline, "Train the baseline (no fact module)");
    train_cmd->add_option("--seed", train_opts.seed, "Seed for init and shuffling");
    train_cmd->add_option("--lr", train_opts.lr, "Learning rate (toy default 1e-2)");
    train_cmd->add_flag("--finetune-lr", train_opts.finetune_lr, "Use the 2e-5 fine-tuning preset");
    train_cmd->add_option("--batch-size", train_opts.batch_size, "Batch size");
    train_cmd->add_option("--max-epochs", train_opts.max_epochs, "Epoch cap");
    train_cmd->add_option("--patience", train_opts.patience, "Early-stopping patience");
    train_cmd->add_option("--embed-dim", train_opts.embed_dim, "Embedding width");
    train_cmd->add_option("--hidden-dim", train_opts.hidden_dim, "Representation width");
    train_cmd->add_option("--max-len-pair", train_opts.max_len_pair, "Pair sequence length");
    train_cmd->add_option("--max-len-fact", train_opts.max_len_fact, "Fact sequence length");
    train_cmd->add_option("--min-freq", train_opts.min_freq, "Vocabulary frequency threshold");
    train_cmd->add_flag("--json", train_opts.json, "Emit a JSON report");

    EvalOpts eval_opts;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a test set");
    eval_cmd->add_option("--model", eval_opts.model_path, "Checkpoint path")->required();
    eval_cmd->add_option("--test", eval_opts.test_path, "Test JSONL")->required();
    eval_cmd->add_option("--kg", eval_opts.kg_path, "Knowledge graph TSV")->required();
    eval_cmd->add_option("--stopwords", eval_opts.stopwords_path, "Stopword file");
    eval_cmd->add_flag("--json", eval_opts.json, "Emit a JSON report");

    CompareOpts compare_opts;
    auto* compare_cmd =
        app.add_subcommand("compare", "Compare two checkpoints with a signed-rank test");
    compare_cmd->add_option("--baseline", compare_opts.baseline_path, "Baseline checkpoint")
        ->required();
    compare_cmd->add_option("--proposed", compare_opts.proposed_path, "Proposed checkpoint")
        ->required();
    compare_cmd->add_option("--test", compare_opts.test_path, "Test JSONL")->required();
    compare_cmd->add_option("--kg", compare_opts.kg_path, "Knowledge graph TSV")->required();
    compare_cmd->add_option("--stopwords", compare_opts.stopwords_path, "Stopword file");
    compare_cmd->add_option("--block-size", compare_opts.block_size, "Accuracy block size");
    compare_cmd->add_flag("--json", compare_opts.json, "Emit a JSON report");

    auto* dataset_cmd = app.add_subcommand("dataset", "Dataset utilities");
    dataset_cmd->require_subcommand(1);

    SplitOpts split_opts;
    auto* split_cmd = dataset_cmd->add_subcommand("split", "Two-stage train/val/test split");
    split_cmd->add_option("--in", split_opts.in_path, "Input JSONL")->required();
    split_cmd->add_option("--seed", split_opts.seed, "Shuffle seed");
    split_cmd->add_flag("--stratified", split_opts.stratified, "Split per label class");
    split_cmd->add_option("--out-train", split_opts.out_train, "Train output")->required();
    split_cmd->add_option("--out-val", split_opts.out_val, "Validation output")->required();
    split_cmd->add_option("--out-test", split_opts.out_test, "Test output")->required();
    split_cmd->add_flag("--json", split_opts.json, "Emit a JSON report");

    DedupOpts dedup_opts;
    auto* dedup_cmd = dataset_cmd->add_subcommand("dedup", "Drop repeated premise/hypothesis pairs");
    dedup_cmd->add_option("--in", dedup_opts.in_path, "Input JSONL")->required();
    dedup_cmd->add_option("--out", dedup_opts.out_path, "Output JSONL")->required();
    dedup_cmd->add_flag("--json", dedup_opts.json, "Emit a JSON report");

    GenOpts gen_opts;
    auto* gen_cmd = dataset_cmd->add_subcommand("gen", "Generate examples via a chat endpoint");
    gen_cmd->add_option("--premises", gen_opts.premises_path, "Premise list, one per line")
        ->required();
    gen_cmd->add_option("--out", gen_opts.out_path, "Output JSONL")->required();
    gen_cmd->add_option("--api-url", gen_opts.api_url, "Chat completion endpoint")->required();
    gen_cmd->add_option("--api-model", gen_opts.api_model, "Remote model name")->required();
    gen_cmd->add_option("--n-paraphrases", gen_opts.n_paraphrases, "Paraphrases per premise");
    gen_cmd->add_option("--n-hypotheses", gen_opts.n_hypotheses, "Hypotheses per label prompt");
    gen_cmd->add_option("--max-words", gen_opts.max_words, "Max words per sentence");
    gen_cmd->add_option("--retries", gen_opts.retries, "Retries per request");
    gen_cmd->add_option("--backoff-ms", gen_opts.backoff_ms, "Retry backoff base (ms)");
    gen_cmd->add_option("--audit", gen_opts.audit_path, "Request/response audit JSONL");
    gen_cmd->add_flag("--json", gen_opts.json, "Emit a JSON report");

    GenKgOpts gen_kg_opts;
    auto* gen_kg_cmd =
        dataset_cmd->add_subcommand("gen-kg", "Generate a KG-grounded synthetic dataset");
    gen_kg_cmd->add_option("--kg", gen_kg_opts.kg_path, "Knowledge graph TSV")->required();
    gen_kg_cmd->add_option("--n-per-label", gen_kg_opts.n_per_label, "Examples per label")
        ->required();
    gen_kg_cmd->add_option("--seed", gen_kg_opts.seed, "Sampling seed");
    gen_kg_cmd->add_option("--out", gen_kg_opts.out_path, "Output JSONL")->required();
    gen_kg_cmd->add_flag("--json", gen_kg_opts.json, "Emit a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*kg_validate) run_kg_validate(kgv);
        if (*facts_cmd) run_facts(facts);
        if (*train_cmd) run_train(train_opts);
        if (*eval_cmd) run_eval(eval_opts);
        if (*compare_cmd) run_compare(compare_opts);
        if (*split_cmd) run_split(split_opts);
        if (*dedup_cmd) run_dedup(dedup_opts);
        if (*gen_cmd) run_gen(gen_opts);
        if (*gen_kg_cmd) run_gen_kg(gen_kg_opts);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
