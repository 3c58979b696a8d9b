#include <doctest.h>

#include <cmath>

#include "factcheck/errors.hpp"
#include "factcheck/model.hpp"
#include "factcheck/rng.hpp"
#include "helpers.hpp"

using namespace factcheck;

namespace {

Model zero_model(ModelVariant variant, const ModelConfig& config, const Vocabulary& vocab) {
    SeededRng rng(0);
    Model model = make_model(variant, vocab, config, rng);
    for (auto& [name, values] : parameter_views(model)) {
        (void)name;
        for (double& v : values) v = 0.0;
    }
    return model;
}

double finite_difference_batch_loss(Model& model,
                                    const std::vector<EncodedSequence>& pairs,
                                    const std::vector<EncodedSequence>& facts,
                                    const std::vector<Label>& golds) {
    double loss = 0.0;
    ForwardCache cache;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        loss += cross_entropy(forward_cached(model, pairs[i], facts[i], cache), golds[i]);
    }
    return loss / static_cast<double>(pairs.size());
}

}  // namespace

TEST_CASE("label round trip and normalization") {
    CHECK(label_from_string("entailment") == Label::entailment);
    CHECK(label_from_string("  CONTRADICTION ") == Label::contradiction);
    CHECK(label_from_string("Neutral") == Label::neutral);
    CHECK_THROWS_AS(label_from_string("maybe"), ParseError);
    CHECK(label_name(Label::neutral) == "neutral");
    CHECK(static_cast<int>(Label::entailment) == 0);
    CHECK(static_cast<int>(Label::contradiction) == 1);
    CHECK(static_cast<int>(Label::neutral) == 2);
}

TEST_CASE("zero parameters give the uniform distribution") {
    const Vocabulary vocab = build_vocab({"a b c"}, 1);
    ModelConfig config;
    config.embed_dim = 4;
    config.hidden_dim = 4;
    for (const ModelVariant variant : {ModelVariant::baseline, ModelVariant::proposed}) {
        const Model model = zero_model(variant, config, vocab);
        const auto probs = forward(model, "a b", "c", "a");
        for (const double p : probs) CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("baseline forward ignores the fact text entirely") {
    const Vocabulary vocab = build_vocab({"a b c x"}, 1);
    ModelConfig config;
    config.embed_dim = 4;
    config.hidden_dim = 4;
    SeededRng rng(17);
    const Model model = make_model(ModelVariant::baseline, vocab, config, rng);

    const auto with_facts = forward(model, "a b", "c", "x x x");
    const auto without = forward(model, "a b", "c", "");
    CHECK(with_facts == without);  // bitwise
}

TEST_CASE("forward matches a scalar step-by-step oracle") {
    // d_e = 1, d_h = 2, proposed variant; every weight hand-set.
    Vocabulary vocab;
    vocab.add("a");  // id 3
    vocab.add("b");  // id 4

    ModelConfig config;
    config.embed_dim = 1;
    config.hidden_dim = 2;
    config.max_len_pair = 4;
    config.max_len_fact = 2;

    Model model = zero_model(ModelVariant::proposed, config, vocab);
    // NLI encoder: E[3] = 0.4, E[4] = -0.6, SEP E[2] = 0.2
    model.nli_encoder.embedding.at(2, 0) = 0.2;
    model.nli_encoder.embedding.at(3, 0) = 0.4;
    model.nli_encoder.embedding.at(4, 0) = -0.6;
    model.nli_encoder.proj.at(0, 0) = 1.0;
    model.nli_encoder.proj.at(1, 0) = -0.5;
    model.nli_encoder.bias = {0.1, 0.2};
    // fact encoder
    model.fact_encoder->embedding.at(3, 0) = -0.3;
    model.fact_encoder->embedding.at(4, 0) = 0.8;
    model.fact_encoder->proj.at(0, 0) = 0.7;
    model.fact_encoder->proj.at(1, 0) = 0.3;
    model.fact_encoder->bias = {0.0, -0.2};
    // classifier: w1 is 2x4, w2 is 3x2
    const double w1[2][4] = {{0.5, -0.4, 0.3, 0.2}, {-0.1, 0.6, -0.7, 0.25}};
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 4; ++c) model.classifier.w1.at(r, c) = w1[r][c];
    model.classifier.b1 = {0.05, -0.05};
    const double w2[3][2] = {{0.9, -0.2}, {-0.3, 0.4}, {0.1, 0.6}};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 2; ++c) model.classifier.w2.at(r, c) = w2[r][c];
    model.classifier.b2 = {0.01, -0.02, 0.03};

    const auto probs = forward(model, "a", "b", "b a");

    // oracle, plain scalars: pair = [a, SEP, b] -> mean = (0.4 + 0.2 - 0.6) / 3
    const double nli_pool = (0.4 + 0.2 - 0.6) / 3.0;
    const double h_nli0 = std::tanh(1.0 * nli_pool + 0.1);
    const double h_nli1 = std::tanh(-0.5 * nli_pool + 0.2);
    const double fact_pool = (0.8 - 0.3) / 2.0;  // fact = [b, a]
    const double h_fact0 = std::tanh(0.7 * fact_pool + 0.0);
    const double h_fact1 = std::tanh(0.3 * fact_pool - 0.2);
    const double z[4] = {h_nli0, h_nli1, h_fact0, h_fact1};
    double hidden[2];
    for (int r = 0; r < 2; ++r) {
        double acc = (r == 0 ? 0.05 : -0.05);
        for (int c = 0; c < 4; ++c) acc += w1[r][c] * z[c];
        hidden[r] = acc > 0.0 ? acc : 0.0;
    }
    double logits[3];
    for (int r = 0; r < 3; ++r) {
        logits[r] = model.classifier.b2[r];
        for (int c = 0; c < 2; ++c) logits[r] += w2[r][c] * hidden[c];
    }
    const double max_logit = std::max({logits[0], logits[1], logits[2]});
    double exp_sum = 0.0;
    for (const double logit : logits) exp_sum += std::exp(logit - max_logit);
    for (std::size_t i = 0; i < 3; ++i) {
        const double expected = std::exp(logits[i] - max_logit) / exp_sum;
        CHECK(probs[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("concatenation order is NLI first, fact second") {
    // A classifier sensitive only to the first block must react to the NLI
    // side and ignore the fact side.
    Vocabulary vocab;
    vocab.add("a");
    ModelConfig config;
    config.embed_dim = 1;
    config.hidden_dim = 1;
    Model model = zero_model(ModelVariant::proposed, config, vocab);
    model.nli_encoder.bias = {0.9};
    model.fact_encoder->bias = {-0.9};
    model.classifier.w1.at(0, 0) = 1.0;  // reads z[0] = h_nli only
    model.classifier.w2.at(0, 0) = 1.0;  // pushes label 0

    const auto probs = forward(model, "", "", "");
    // h_nli = tanh(0.9) > 0 feeds logit 0 through the ReLU; if the blocks were
    // swapped, z[0] would be tanh(-0.9) < 0 and the hidden unit would be dead.
    CHECK(probs[0] > probs[1]);
    const double expected_hidden = std::tanh(0.9);
    const double expected_logit = expected_hidden;
    const double denom = std::exp(expected_logit) + 2.0;
    CHECK(probs[0] == doctest::Approx(std::exp(expected_logit) / denom).epsilon(1e-12));
}

TEST_CASE("cross entropy values") {
    CHECK(cross_entropy({1.0 / 3, 1.0 / 3, 1.0 / 3}, Label::neutral) ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(cross_entropy({1.0, 0.0, 0.0}, Label::entailment) == doctest::Approx(0.0));
    CHECK(cross_entropy({0.7, 0.2, 0.1}, Label::contradiction) ==
          doctest::Approx(-std::log(0.2)).epsilon(1e-12));
    // clamp keeps the loss finite
    CHECK(cross_entropy({0.0, 1.0, 0.0}, Label::entailment) ==
          doctest::Approx(-std::log(1e-12)).epsilon(1e-12));
    CHECK(cross_entropy({0.5, 0.25, 0.25}, Label::entailment) >= 0.0);
}

TEST_CASE("softmax probabilities sum to one") {
    SeededRng rng(23);
    for (int round = 0; round < 200; ++round) {
        const std::array<double, 3> logits = {rng.uniform_real(-15, 15), rng.uniform_real(-15, 15),
                                              rng.uniform_real(-15, 15)};
        const auto probs = softmax3(logits);
        double sum = 0.0;
        for (const double p : probs) {
            CHECK(p > 0.0);
            CHECK(p < 1.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("predict breaks ties toward the lowest label id") {
    const Vocabulary vocab = build_vocab({"a"}, 1);
    ModelConfig config;
    config.embed_dim = 2;
    config.hidden_dim = 2;
    const Model model = zero_model(ModelVariant::proposed, config, vocab);
    const Prediction pred =
        predict(model, "a", "a", testutil::table2_kg(), testutil::shipped_stopwords());
    CHECK(pred.label == Label::entailment);
}

TEST_CASE("baseline predictions are invariant under KG substitution") {
    const Vocabulary vocab = build_vocab({"salah satu gejala covid-19 batuk"}, 1);
    ModelConfig config;
    config.embed_dim = 4;
    config.hidden_dim = 4;
    SeededRng rng(31);
    const Model model = make_model(ModelVariant::baseline, vocab, config, rng);

    const KnowledgeGraph kg1 = testutil::table2_kg();
    const KnowledgeGraph kg2 = KnowledgeGraph::from_triplets({{"batuk", "TERKAIT", "covid-19"}});

    const Prediction p1 = predict(model, "salah satu", "gejala Covid-19 batuk", kg1,
                                  testutil::shipped_stopwords());
    const Prediction p2 = predict(model, "salah satu", "gejala Covid-19 batuk", kg2,
                                  testutil::shipped_stopwords());
    CHECK(p1.label == p2.label);
    CHECK(p1.probs == p2.probs);  // bitwise
    CHECK(p1.facts.text != p2.facts.text);  // the paragraphs differ, the prediction does not
}

TEST_CASE("analytic batch gradients match finite differences on tiny models") {
    SeededRng rng(37);
    const Vocabulary vocab = build_vocab({"a b c d e"}, 1);  // V = 8

    for (int round = 0; round < 6; ++round) {
        const ModelVariant variant = round % 2 == 0 ? ModelVariant::proposed : ModelVariant::baseline;
        ModelConfig config;
        config.embed_dim = 2 + rng.uniform_index(3);
        config.hidden_dim = 2 + rng.uniform_index(3);
        config.max_len_pair = 8;
        config.max_len_fact = 6;
        Model model = make_model(variant, vocab, config, rng);

        const std::vector<std::string> texts = {"a b", "c d e", "e a", "b"};
        std::vector<EncodedSequence> pairs, facts;
        std::vector<Label> golds;
        for (int i = 0; i < 3; ++i) {
            pairs.push_back(encode_pair(model.vocab, texts[rng.uniform_index(texts.size())],
                                        texts[rng.uniform_index(texts.size())],
                                        config.max_len_pair));
            facts.push_back(encode_text(model.vocab, texts[rng.uniform_index(texts.size())],
                                        config.max_len_fact));
            golds.push_back(static_cast<Label>(static_cast<int>(rng.uniform_index(3))));
        }

        ModelGrads grads = zero_grads_like(model);
        ForwardCache cache;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            forward_cached(model, pairs[i], facts[i], cache);
            accumulate_gradients(model, pairs[i], facts[i], cache, golds[i], grads);
        }
        scale_gradients(grads, 1.0 / static_cast<double>(pairs.size()));

        auto weight_views = parameter_views(model);
        auto grad_views = parameter_views(grads);
        REQUIRE(weight_views.size() == grad_views.size());
        for (std::size_t t = 0; t < weight_views.size(); ++t) {
            auto& [name, weights] = weight_views[t];
            const auto& analytic = grad_views[t].second;
            for (std::size_t i = 0; i < weights.size(); ++i) {
                const double saved = weights[i];
                const double h = 1e-5;
                weights[i] = saved + h;
                const double up = finite_difference_batch_loss(model, pairs, facts, golds);
                weights[i] = saved - h;
                const double down = finite_difference_batch_loss(model, pairs, facts, golds);
                weights[i] = saved;
                const double fd = (up - down) / (2.0 * h);
                const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-6});
                CAPTURE(name);
                CHECK(std::abs(fd - analytic[i]) / denom < 1e-4);
            }
        }
    }
}
