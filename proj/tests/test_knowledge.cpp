#include <doctest.h>

#include <map>
#include <set>
#include <string>

#include "factcheck/errors.hpp"
#include "factcheck/knowledge.hpp"
#include "factcheck/rng.hpp"
#include "helpers.hpp"

using namespace factcheck;
using testutil::shipped_stopwords;
using testutil::table2_kg;

TEST_CASE("preprocess_query reproduces the fixture query") {
    const auto words = preprocess_query("Salah satu gejala Covid-19 adalah batuk", shipped_stopwords());
    CHECK(words == std::vector<std::string>{"salah", "satu", "gejala", "covid-19", "batuk"});
}

TEST_CASE("preprocess_query edge cases") {
    const StopwordList& stopwords = shipped_stopwords();
    CHECK(preprocess_query("", stopwords).empty());
    CHECK(preprocess_query("adalah yang dan", stopwords).empty());

    // edge punctuation falls off, interior hyphens survive
    CHECK(preprocess_query("batuk.", stopwords) == std::vector<std::string>{"batuk"});
    CHECK(preprocess_query("\"Covid-19!\"", stopwords) == std::vector<std::string>{"covid-19"});
    CHECK(preprocess_query("“covid-19”", stopwords) == std::vector<std::string>{"covid-19"});
    CHECK(preprocess_query("- -- batuk,", stopwords) == std::vector<std::string>{"batuk"});
    CHECK(preprocess_query("gejala: demam; batuk?", stopwords) ==
          std::vector<std::string>{"gejala", "demam", "batuk"});

    // duplicates and order preserved
    CHECK(preprocess_query("batuk batuk gejala", stopwords) ==
          std::vector<std::string>{"batuk", "batuk", "gejala"});
}

TEST_CASE("shipped stopword file covers the required words") {
    const StopwordList& stopwords = shipped_stopwords();
    for (const char* word : {"adalah", "yang", "dan", "dengan", "untuk", "pada", "dari", "ini", "itu"}) {
        CAPTURE(word);
        CHECK(stopwords.contains(word));
    }
    // the fixture query's surviving words must not be stopwords
    for (const char* word : {"salah", "satu", "gejala", "covid-19", "batuk"}) {
        CAPTURE(word);
        CHECK_FALSE(stopwords.contains(word));
    }
}

TEST_CASE("builtin stopword list matches the shipped file") {
    CHECK(StopwordList::default_indonesian().sorted_words() == shipped_stopwords().sorted_words());
}

TEST_CASE("stopword construction validates entries") {
    CHECK_THROWS_AS(StopwordList({"ok", ""}), ParseError);
    CHECK_THROWS_AS(StopwordList({"two words"}), ParseError);
    const StopwordList upper({"ADALAH"});
    CHECK(upper.contains("adalah"));
}

TEST_CASE("match_entities finds fixture sources with first-wins dedup") {
    const KnowledgeGraph kg = table2_kg();
    CHECK(match_entities({"salah", "satu", "gejala", "covid-19", "batuk"}, kg) ==
          std::vector<std::string>{"covid-19"});
    CHECK(match_entities({}, kg).empty());
    CHECK(match_entities({"covid-19", "covid-19"}, kg) == std::vector<std::string>{"covid-19"});
}

TEST_CASE("match_entities agrees with a set-based oracle") {
    const KnowledgeGraph kg = KnowledgeGraph::from_triplets({
        {"a", "R", "x"}, {"b", "R", "y"}, {"c", "R", "z"},
    });
    SeededRng rng(7);
    const std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
    for (int round = 0; round < 100; ++round) {
        std::vector<std::string> words;
        const std::size_t n = rng.uniform_index(8);
        for (std::size_t i = 0; i < n; ++i) words.push_back(pool[rng.uniform_index(pool.size())]);

        const auto matched = match_entities(words, kg);
        // oracle: set membership + first-occurrence order
        std::set<std::string> seen;
        std::vector<std::string> expected;
        for (const auto& w : words) {
            if (kg.has_source(w) && seen.insert(w).second) expected.push_back(w);
        }
        CHECK(matched == expected);
    }
}

TEST_CASE("retrieve_triplets concatenates per-entity blocks in order") {
    const KnowledgeGraph kg = table2_kg();
    const auto triplets = retrieve_triplets({"covid-19"}, kg);
    REQUIRE(triplets.size() == 2);
    CHECK(triplets[0].relation == "DISEBABKAN_OLEH");
    CHECK(triplets[1].relation == "MEMILIKI_GEJALA");

    CHECK(retrieve_triplets({}, kg).empty());

    const KnowledgeGraph two = KnowledgeGraph::from_triplets({
        {"x", "R", "1"}, {"y", "S", "2"},
    });
    const auto ordered = retrieve_triplets({"y", "x"}, two);
    REQUIRE(ordered.size() == 2);
    CHECK(ordered[0].source == "y");
    CHECK(ordered[1].source == "x");

    // nested-loop oracle
    std::vector<Triplet> expected;
    const std::vector<std::string> query = {"y", "x"};
    for (const std::string& entity : query) {
        for (const Triplet& t : two.triplets()) {
            if (t.source == entity) expected.push_back(t);
        }
    }
    CHECK(ordered == expected);
}

TEST_CASE("verbalize_triplet") {
    CHECK(verbalize_triplet({"COVID-19", "HAVE_SYMPTOM", "cough"}) == "COVID-19 have symptom cough");
    CHECK(verbalize_triplet({"covid-19", "MEMILIKI_GEJALA", "batuk"}) ==
          "covid-19 memiliki gejala batuk");
    CHECK(verbalize_triplet({"a", "R", "b"}) == "a r b");
}

TEST_CASE("build_fact_paragraph join rule") {
    CHECK(build_fact_paragraph({"covid-19 disebabkan oleh sars-cov-2",
                                "covid-19 memiliki gejala batuk"}) ==
          "covid-19 disebabkan oleh sars-cov-2. Covid-19 memiliki gejala batuk.");
    CHECK(build_fact_paragraph({}) == "");
    CHECK(build_fact_paragraph({"a r b"}) == "a r b.");
}

TEST_CASE("facts_for_hypothesis end to end") {
    const KnowledgeGraph kg = table2_kg();
    const StopwordList& stopwords = shipped_stopwords();

    const FactParagraph facts =
        facts_for_hypothesis("Salah satu gejala Covid-19 adalah batuk", kg, stopwords);
    CHECK(facts.text == "covid-19 disebabkan oleh sars-cov-2. Covid-19 memiliki gejala batuk.");
    REQUIRE(facts.sentences.size() == 2);
    REQUIRE(facts.provenance.size() == 2);

    CHECK(facts_for_hypothesis("", kg, stopwords).empty());

    // hypothesis with vocabulary disjoint from every source entity
    const std::string unrelated = "langit senja berwarna jingga";
    for (const std::string& word : preprocess_query(unrelated, stopwords)) {
        CAPTURE(word);
        CHECK_FALSE(kg.has_source(word));
    }
    CHECK(facts_for_hypothesis(unrelated, kg, stopwords).empty());
}

TEST_CASE("facts_for_hypothesis determinism and sentence consistency") {
    const KnowledgeGraph kg = table2_kg();
    const StopwordList& stopwords = shipped_stopwords();
    const std::string hypothesis = "Salah satu gejala Covid-19 adalah batuk";

    const FactParagraph a = facts_for_hypothesis(hypothesis, kg, stopwords);
    const FactParagraph b = facts_for_hypothesis(hypothesis, kg, stopwords);
    CHECK(a.text == b.text);
    CHECK(a.sentences == b.sentences);

    CHECK(a.sentences.size() == a.provenance.size());
    for (std::size_t i = 0; i < a.sentences.size(); ++i) {
        CHECK(a.sentences[i] == verbalize_triplet(a.provenance[i]));
    }
    CHECK(a.text == build_fact_paragraph(a.sentences));
}

TEST_CASE("adding an unmatched triplet leaves output unchanged") {
    const StopwordList& stopwords = shipped_stopwords();
    const std::string hypothesis = "Salah satu gejala Covid-19 adalah batuk";
    const FactParagraph before = facts_for_hypothesis(hypothesis, table2_kg(), stopwords);

    // insert an unrelated triplet in the middle of the file order
    const KnowledgeGraph grown = KnowledgeGraph::from_triplets({
        {"covid-19", "DISEBABKAN_OLEH", "sars-cov-2"},
        {"influenza", "MEMILIKI_GEJALA", "demam"},
        {"covid-19", "MEMILIKI_GEJALA", "batuk"},
    });
    const FactParagraph after = facts_for_hypothesis(hypothesis, grown, stopwords);
    CHECK(before.text == after.text);
    CHECK(before.provenance == after.provenance);
}

TEST_CASE("enlarging the stopword set never adds triplets") {
    const KnowledgeGraph kg = KnowledgeGraph::from_triplets({
        {"alpha", "R_ONE", "x"}, {"beta", "R_TWO", "y"}, {"gamma", "R_THREE", "z"},
    });
    SeededRng rng(11);
    const std::vector<std::string> pool = {"alpha", "beta", "gamma", "delta", "kata"};
    for (int round = 0; round < 50; ++round) {
        std::string hypothesis;
        const std::size_t n = 1 + rng.uniform_index(6);
        for (std::size_t i = 0; i < n; ++i) {
            hypothesis += pool[rng.uniform_index(pool.size())] + " ";
        }
        const StopwordList small({"kata"});
        const StopwordList big({"kata", "alpha", "beta"});

        const FactParagraph more = facts_for_hypothesis(hypothesis, kg, small);
        const FactParagraph fewer = facts_for_hypothesis(hypothesis, kg, big);

        std::map<std::string, int> counts;
        for (const Triplet& t : more.provenance) ++counts[verbalize_triplet(t)];
        for (const Triplet& t : fewer.provenance) --counts[verbalize_triplet(t)];
        for (const auto& [sentence, count] : counts) {
            CAPTURE(sentence);
            CHECK(count >= 0);  // the bigger stopword list can only remove
        }
    }
}

TEST_CASE("paragraph round-trips through the join rule") {
    const FactParagraph facts = facts_for_hypothesis("Salah satu gejala Covid-19 adalah batuk",
                                                     table2_kg(), shipped_stopwords());
    REQUIRE_FALSE(facts.empty());

    std::string body = facts.text;
    REQUIRE(body.back() == '.');
    body.pop_back();
    std::vector<std::string> recovered;
    std::size_t pos = 0;
    while (true) {
        const std::size_t split = body.find(". ", pos);
        if (split == std::string::npos) {
            recovered.push_back(body.substr(pos));
            break;
        }
        recovered.push_back(body.substr(pos, split - pos));
        pos = split + 2;
    }
    REQUIRE(recovered.size() == facts.sentences.size());
    for (std::size_t i = 0; i < recovered.size(); ++i) {
        std::string expected = facts.sentences[i];
        if (i > 0 && expected.front() >= 'a' && expected.front() <= 'z') {
            expected.front() = static_cast<char>(expected.front() - 'a' + 'A');
        }
        CHECK(recovered[i] == expected);
    }
}

TEST_CASE("dedupe option drops repeated triplets") {
    const KnowledgeGraph kg = KnowledgeGraph::from_triplets({
        {"a", "R", "b"}, {"a", "R", "b"},
    });
    const StopwordList none{std::vector<std::string>{}};
    const FactParagraph kept = facts_for_hypothesis("a", kg, none);
    CHECK(kept.sentences.size() == 2);

    FactOptions options;
    options.dedupe_triplets = true;
    const FactParagraph deduped = facts_for_hypothesis("a", kg, none, options);
    CHECK(deduped.sentences.size() == 1);
}

TEST_CASE("load_stopwords parses comments and rejects bad lines") {
    testutil::TempFile file(".txt");
    testutil::write_file(file.path(), "# comment\nadalah\n\nyang\n");
    const StopwordList list = load_stopwords(file.path());
    CHECK(list.size() == 2);
    CHECK(list.contains("adalah"));

    testutil::write_file(file.path(), "dua kata\n");
    CHECK_THROWS_AS(load_stopwords(file.path()), ParseError);

    CHECK_THROWS_AS(load_stopwords("/nonexistent/stopwords.txt"), IoError);
}
