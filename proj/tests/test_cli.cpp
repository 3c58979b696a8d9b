#include <doctest.h>

#include <cstdio>
#include <string>

#include <json.hpp>

#include "factcheck/dataset.hpp"
#include "helpers.hpp"

using nlohmann::ordered_json;
using testutil::TempFile;
using testutil::write_file;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string(FACTCHECK_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = ::popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buffer[4096];
    while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) result.output += buffer;
    const int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// Writes the canonical fixture graph.
void write_fixture_kg(const TempFile& file) { write_file(file.path(), testutil::table2_kg_tsv()); }

}  // namespace

TEST_CASE("kg-validate reports counts and exit codes") {
    TempFile kg(".tsv");
    write_fixture_kg(kg);
    const CliResult ok = run_cli("kg-validate --kg " + kg.str());
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("2 triplets") != std::string::npos);

    TempFile dup(".tsv");
    write_file(dup.path(), "a\tR\tb\na\tR\tb\n");
    const CliResult dup_result = run_cli("kg-validate --kg " + dup.str() + " --json");
    CHECK(dup_result.exit_code == 0);
    const auto report = ordered_json::parse(dup_result.output);
    CHECK(report.at("result").at("duplicates") == 1);

    TempFile bad(".tsv");
    write_file(bad.path(), "a\tR\tb\nline without tabs\n");
    const CliResult failed = run_cli("kg-validate --kg " + bad.str());
    CHECK(failed.exit_code == 1);
    CHECK(failed.output.find("line 2") != std::string::npos);
}

TEST_CASE("facts prints the fixture paragraph") {
    TempFile kg(".tsv");
    write_fixture_kg(kg);
    const CliResult result =
        run_cli("facts --kg " + kg.str() + " --text \"Salah satu gejala Covid-19 adalah batuk\"");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find(
              "covid-19 disebabkan oleh sars-cov-2. Covid-19 memiliki gejala batuk.") !=
          std::string::npos);

    const CliResult empty = run_cli("facts --kg " + kg.str() + " --text \"tidak cocok\"");
    CHECK(empty.exit_code == 0);
    CHECK(empty.output.find("empty fact paragraph") != std::string::npos);

    const CliResult verbose = run_cli(
        "facts --kg " + kg.str() + " --text \"Salah satu gejala Covid-19 adalah batuk\" --verbose");
    CHECK(verbose.exit_code == 0);
    CHECK(verbose.output.find("salah satu gejala covid-19 batuk") != std::string::npos);
    CHECK(verbose.output.find("entities:  covid-19") != std::string::npos);
    CHECK(verbose.output.find("(covid-19, DISEBABKAN_OLEH, sars-cov-2)") != std::string::npos);
    CHECK(verbose.output.find("covid-19 memiliki gejala batuk") != std::string::npos);
}

TEST_CASE("facts --json emits a parseable report with a config snapshot") {
    TempFile kg(".tsv");
    write_fixture_kg(kg);
    const CliResult result = run_cli("facts --kg " + kg.str() +
                                     " --text \"Salah satu gejala Covid-19 adalah batuk\" --json");
    CHECK(result.exit_code == 0);
    const auto report = ordered_json::parse(result.output);
    CHECK(report.at("command") == "facts");
    CHECK(report.contains("config"));
    CHECK(report.at("config").at("kg") == kg.str());
    CHECK(report.at("result").at("paragraph") ==
          "covid-19 disebabkan oleh sars-cov-2. Covid-19 memiliki gejala batuk.");
}

TEST_CASE("dataset split echoes the part sizes") {
    TempFile in(".jsonl"), out_train(".jsonl"), out_val(".jsonl"), out_test(".jsonl");
    {
        factcheck::LabeledDataset dataset;
        for (int i = 0; i < 125; ++i) {
            dataset.examples.push_back(factcheck::Example{
                "premis " + std::to_string(i), "hipotesis " + std::to_string(i),
                static_cast<factcheck::Label>(i % 3)});
        }
        factcheck::save_dataset(dataset, in.path());
    }
    const CliResult result =
        run_cli("dataset split --in " + in.str() + " --seed 1 --out-train " + out_train.str() +
                " --out-val " + out_val.str() + " --out-test " + out_test.str() + " --json");
    CHECK(result.exit_code == 0);
    const auto report = ordered_json::parse(result.output);
    CHECK(report.at("result").at("train") == 80);
    CHECK(report.at("result").at("val") == 20);
    CHECK(report.at("result").at("test") == 25);
    CHECK(factcheck::load_dataset(out_train.path()).size() == 80);
}

TEST_CASE("dataset dedup is idempotent through the CLI") {
    TempFile in(".jsonl"), once(".jsonl"), twice(".jsonl");
    write_file(in.path(),
               R"({"premise":"p","hypothesis":"h","label":"entailment"})" "\n"
               R"({"premise":"p","hypothesis":"h","label":"entailment"})" "\n"
               R"({"premise":"q","hypothesis":"h","label":"neutral"})" "\n");
    CHECK(run_cli("dataset dedup --in " + in.str() + " --out " + once.str()).exit_code == 0);
    CHECK(run_cli("dataset dedup --in " + once.str() + " --out " + twice.str()).exit_code == 0);
    CHECK(testutil::read_file(once.path()) == testutil::read_file(twice.path()));
    CHECK(factcheck::load_dataset(once.path()).size() == 2);
}

TEST_CASE("dataset gen-kg produces balanced labels") {
    TempFile kg(".tsv"), out(".jsonl");
    write_fixture_kg(kg);
    const CliResult result = run_cli("dataset gen-kg --kg " + kg.str() +
                                     " --n-per-label 5 --seed 3 --out " + out.str() + " --json");
    CHECK(result.exit_code == 0);
    const auto dataset = factcheck::load_dataset(out.path());
    REQUIRE(dataset.size() == 15);
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& e : dataset.examples) ++counts[static_cast<int>(e.label)];
    CHECK(counts[0] == 5);
    CHECK(counts[1] == 5);
    CHECK(counts[2] == 5);
}

TEST_CASE("train, eval and compare round-trip through checkpoints") {
    TempFile kg(".tsv"), train_file(".jsonl"), ckpt(".json"), ckpt2(".json");
    TempFile history1(".json"), history2(".json");
    write_fixture_kg(kg);
    {
        factcheck::LabeledDataset dataset;
        const char* markers[3] = {"alfa", "beta", "gamma"};
        for (int i = 0; i < 12; ++i) {
            dataset.examples.push_back(factcheck::Example{
                "pernyataan nomor " + std::to_string(i),
                std::string(markers[i % 3]) + " token " + std::to_string(i),
                static_cast<factcheck::Label>(i % 3)});
        }
        factcheck::save_dataset(dataset, train_file.path());
    }

    const std::string train_args = "train --train " + train_file.str() + " --val " +
                                   train_file.str() + " --kg " + kg.str() +
                                   " --seed 4 --max-epochs 3 --patience 3 --min-freq 1 "
                                   "--embed-dim 8 --hidden-dim 8 ";
    const CliResult trained =
        run_cli(train_args + "--out " + ckpt.str() + " --history " + history1.str());
    CHECK(trained.exit_code == 0);
    CHECK(trained.output.find("best epoch") != std::string::npos);

    // same seed, same history bytes
    const CliResult again =
        run_cli(train_args + "--out " + ckpt2.str() + " --history " + history2.str());
    CHECK(again.exit_code == 0);
    CHECK(testutil::read_file(history1.path()) == testutil::read_file(history2.path()));
    CHECK(testutil::read_file(ckpt.path()) == testutil::read_file(ckpt2.path()));

    const CliResult eval = run_cli("eval --model " + ckpt.str() + " --test " + train_file.str() +
                                   " --kg " + kg.str() + " --json");
    CHECK(eval.exit_code == 0);
    const auto report = ordered_json::parse(eval.output);
    CHECK(report.at("result").at("metrics").contains("accuracy"));
    CHECK(report.at("result").at("metrics").at("per_class_true").contains("entailment"));
    CHECK(report.at("config").contains("model"));

    // comparing a checkpoint against itself: every difference is zero
    const CliResult compare = run_cli("compare --baseline " + ckpt.str() + " --proposed " +
                                      ckpt.str() + " --test " + train_file.str() + " --kg " +
                                      kg.str() + " --block-size 4");
    CHECK(compare.exit_code == 0);
    CHECK(compare.output.find("not significant") != std::string::npos);
    // both checkpoints are the proposed variant; the --baseline slot warns
    CHECK(compare.output.find("warning") != std::string::npos);
}

TEST_CASE("baseline training writes a baseline checkpoint") {
    TempFile kg(".tsv"), data(".jsonl"), ckpt(".json");
    write_fixture_kg(kg);
    {
        factcheck::LabeledDataset dataset;
        for (int i = 0; i < 6; ++i) {
            dataset.examples.push_back(factcheck::Example{"p " + std::to_string(i),
                                                          "h " + std::to_string(i),
                                                          static_cast<factcheck::Label>(i % 3)});
        }
        factcheck::save_dataset(dataset, data.path());
    }
    const CliResult result = run_cli("train --train " + data.str() + " --val " + data.str() +
                                     " --kg " + kg.str() + " --baseline --max-epochs 2 " +
                                     "--min-freq 1 --embed-dim 4 --hidden-dim 4 --out " + ckpt.str());
    CHECK(result.exit_code == 0);
    const auto doc = ordered_json::parse(testutil::read_file(ckpt.path()));
    CHECK(doc.at("variant") == "baseline");
}

TEST_CASE("CLI surfaces usage and runtime errors distinctly") {
    CHECK(run_cli("no-such-command").exit_code == 1);
    CHECK(run_cli("facts --kg /nonexistent.tsv --text x").exit_code == 2);  // I/O failure
    TempFile kg(".tsv");
    write_file(kg.path(), "broken line\n");
    CHECK(run_cli("facts --kg " + kg.str() + " --text x").exit_code == 1);  // parse failure
    CHECK(run_cli("eval --model /nonexistent.ckpt --test x --kg y").exit_code == 2);
}
