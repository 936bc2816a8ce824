#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "traittopics/errors.hpp"
#include "traittopics/lda.hpp"
#include "traittopics/synth.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace traittopics;

namespace {

Vocabulary make_vocab(const std::vector<std::string>& words) {
    Vocabulary v;
    v.words = words;
    v.doc_freq.assign(words.size(), 1);
    for (std::size_t i = 0; i < words.size(); ++i) v.index.emplace(words[i], i);
    return v;
}

LdaConfig quick_config(int topics, std::uint64_t seed) {
    LdaConfig cfg;
    cfg.topics = topics;
    cfg.alpha = 0.5;
    cfg.beta = 0.01;
    cfg.iterations = 60;
    cfg.burn_in = 30;
    cfg.sample_every = 5;
    cfg.seed = seed;
    return cfg;
}

// Count tables recomputed from scratch must equal the stored ones.
void check_count_consistency(const TopicModel& m, const std::vector<Bow>& docs) {
    Grid<std::int32_t> n_kw(m.config.topics, m.vocab.size(), 0);
    Grid<std::int32_t> n_dk(docs.size(), m.config.topics, 0);
    std::vector<std::int32_t> n_k(m.config.topics, 0);
    std::vector<std::int32_t> n_d(docs.size(), 0);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::vector<std::int32_t> tokens;
        for (const auto& [w, c] : docs[d]) {
            for (int i = 0; i < c; ++i) tokens.push_back(w);
        }
        REQUIRE(tokens.size() == m.assignments[d].size());
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            int k = m.assignments[d][i];
            ++n_kw.at(k, tokens[i]);
            ++n_dk.at(d, k);
            ++n_k[k];
            ++n_d[d];
        }
    }
    CHECK(n_kw == m.count_topic_word);
    CHECK(n_dk == m.count_doc_topic);
    CHECK(n_k == m.count_topic);
    CHECK(n_d == m.count_doc);
}

} // namespace

TEST_CASE("K=1 phi is the smoothed corpus unigram distribution") {
    auto vocab = make_vocab({"a", "b", "c"});
    std::vector<Bow> docs = {{{0, 3}, {1, 1}}, {{1, 2}, {2, 4}}};
    LdaConfig cfg = quick_config(1, 42);
    auto model = fit_gibbs(docs, vocab, cfg);

    const double N = 10.0, V = 3.0;
    const std::vector<double> counts = {3.0, 3.0, 4.0};
    for (int w = 0; w < 3; ++w) {
        double expected = (counts[w] + cfg.beta) / (N + V * cfg.beta);
        CHECK(model.phi.at(0, w) == doctest::Approx(expected).epsilon(1e-12));
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
        CHECK(model.theta.at(d, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rows of phi and theta are stochastic; counts match assignments") {
    auto vocab = make_vocab({"a", "b", "c", "d", "e"});
    std::vector<Bow> docs;
    std::mt19937_64 rng(5);
    for (int d = 0; d < 20; ++d) {
        Bow bow;
        for (int w = 0; w < 5; ++w) {
            int c = static_cast<int>(rng() % 4);
            if (c > 0) bow.emplace_back(w, c);
        }
        if (bow.empty()) bow.emplace_back(0, 1);
        docs.push_back(bow);
    }
    auto model = fit_gibbs(docs, vocab, quick_config(3, 7));

    for (int k = 0; k < 3; ++k) {
        double sum = 0.0;
        for (int w = 0; w < 5; ++w) {
            CHECK(model.phi.at(k, w) >= 0.0);
            sum += model.phi.at(k, w);
        }
        CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
        double sum = 0.0;
        for (int k = 0; k < 3; ++k) {
            CHECK(model.theta.at(d, k) >= 0.0);
            sum += model.theta.at(d, k);
        }
        CHECK(std::fabs(sum - 1.0) < 1e-9);
    }
    check_count_consistency(model, docs);
}

TEST_CASE("same seed gives bit-identical fits") {
    auto vocab = make_vocab({"a", "b", "c", "d"});
    std::vector<Bow> docs = {{{0, 2}, {1, 3}}, {{2, 1}, {3, 2}}, {{0, 1}, {3, 3}}};
    auto m1 = fit_gibbs(docs, vocab, quick_config(2, 123));
    auto m2 = fit_gibbs(docs, vocab, quick_config(2, 123));
    CHECK(m1.assignments == m2.assignments);
    CHECK(m1.phi.data == m2.phi.data);
    CHECK(m1.theta.data == m2.theta.data);
}

TEST_CASE("fit_gibbs rejects bad input") {
    auto vocab = make_vocab({"a"});
    CHECK_THROWS_AS(fit_gibbs({}, vocab, quick_config(1, 1)), DataError);
    std::vector<Bow> with_empty = {{{0, 2}}, {}};
    try {
        fit_gibbs(with_empty, vocab, quick_config(1, 1));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("document 1") != std::string::npos);
    }
    LdaConfig bad = quick_config(1, 1);
    bad.burn_in = bad.iterations;
    CHECK_THROWS_AS(fit_gibbs({{{0, 1}}}, vocab, bad), DataError);
    LdaConfig neg = quick_config(1, 1);
    neg.alpha = 0.0;
    CHECK_THROWS_AS(fit_gibbs({{{0, 1}}}, vocab, neg), DataError);
}

TEST_CASE("log_likelihood: single word, K=1") {
    auto vocab = make_vocab({"w", "x"});
    std::vector<Bow> docs = {{{0, 1}}};
    auto model = fit_gibbs(docs, vocab, quick_config(1, 9));
    CHECK(log_likelihood(model, docs) ==
          doctest::Approx(std::log(model.phi.at(0, 0))).epsilon(1e-12));
}

TEST_CASE("log_likelihood: doubling a corpus doubles it") {
    auto vocab = make_vocab({"a", "b", "c"});
    std::vector<Bow> docs = {{{0, 2}, {1, 1}}, {{2, 3}}};
    auto model = fit_gibbs(docs, vocab, quick_config(2, 11));

    // a doubled corpus evaluated with the same per-doc theta rows
    TopicModel doubled = model;
    doubled.theta = Grid<double>(4, 2, 0.0);
    for (int d = 0; d < 4; ++d) {
        for (int k = 0; k < 2; ++k) doubled.theta.at(d, k) = model.theta.at(d % 2, k);
    }
    std::vector<Bow> docs2 = {docs[0], docs[1], docs[0], docs[1]};
    CHECK(log_likelihood(doubled, docs2) ==
          doctest::Approx(2.0 * log_likelihood(model, docs)).epsilon(1e-12));
}

TEST_CASE("log_likelihood: true parameters beat shuffled rows on planted data") {
    SynthSpec spec;
    spec.seed = 31;
    spec.vocab_size = 40;
    spec.topics = 4;
    spec.docs = 60;
    spec.tokens_per_doc = 50;
    spec.theta_alpha = 0.2;
    spec.phi_concentration = 0.05;
    auto corpus = generate_lda_corpus(spec);

    TopicModel truth;
    truth.config = quick_config(4, 0);
    truth.vocab = corpus.vocab;
    truth.phi = corpus.true_phi;
    truth.theta = corpus.true_theta;

    TopicModel shuffled = truth;
    for (int w = 0; w < spec.vocab_size; ++w) {
        for (int k = 0; k < 4; ++k) {
            shuffled.phi.at(k, w) = corpus.true_phi.at((k + 1) % 4, w);
        }
    }
    CHECK(log_likelihood(truth, corpus.docs) > log_likelihood(shuffled, corpus.docs));
}

TEST_CASE("log_likelihood rejects tokens outside the vocabulary") {
    auto vocab = make_vocab({"a", "b"});
    std::vector<Bow> docs = {{{0, 1}}};
    auto model = fit_gibbs(docs, vocab, quick_config(1, 2));
    std::vector<Bow> bad = {{{5, 1}}};
    CHECK_THROWS_AS(log_likelihood(model, bad), DataError);
}

TEST_CASE("ll trace is recorded") {
    auto vocab = make_vocab({"a", "b", "c"});
    std::vector<Bow> docs = {{{0, 2}, {1, 1}}, {{2, 3}}};
    auto model = fit_gibbs(docs, vocab, quick_config(2, 17));
    CHECK(!model.ll_trace.empty());
    for (double v : model.ll_trace) CHECK(std::isfinite(v));
}

TEST_CASE("top_words: ordering, exclusion, short lists") {
    TopicModel model;
    model.config = quick_config(1, 0);
    model.vocab = make_vocab({"beer", "wine", "the"});
    model.phi = Grid<double>(1, 3, 0.0);
    model.phi.at(0, 0) = 0.5;
    model.phi.at(0, 1) = 0.3;
    model.phi.at(0, 2) = 0.2;
    model.theta = Grid<double>(1, 1, 1.0);

    auto exclude = make_lexicon("ex", {"the"});
    auto list = top_words(model, 0, 2, exclude);
    REQUIRE(list.size() == 2);
    CHECK(list[0] == WordEntry{"beer", 0.5});
    CHECK(list[1] == WordEntry{"wine", 0.3});

    auto all_excluded = make_lexicon("ex", {"beer", "wine", "the"});
    CHECK(top_words(model, 0, 2, all_excluded).empty());

    // tie broken lexicographically
    model.phi.at(0, 0) = 0.4;
    model.phi.at(0, 1) = 0.4;
    model.phi.at(0, 2) = 0.2;
    auto tied = top_words(model, 0, 3, Lexicon{});
    CHECK(tied[0].word == "beer");
    CHECK(tied[1].word == "wine");

    CHECK_THROWS_AS(top_words(model, 5, 2, Lexicon{}), DataError);
}

TEST_CASE("model JSON round trip preserves everything that matters") {
    auto vocab = make_vocab({"a", "b", "c", "d"});
    std::vector<Bow> docs = {{{0, 2}, {1, 3}}, {{2, 1}, {3, 2}}};
    auto model = fit_gibbs(docs, vocab, quick_config(2, 77));
    auto loaded = model_from_json(model_to_json(model));

    CHECK(loaded.config.topics == model.config.topics);
    CHECK(loaded.config.seed == model.config.seed);
    CHECK(loaded.vocab.words == model.vocab.words);
    CHECK(loaded.phi.data == model.phi.data);    // exact, not just 1e-12
    CHECK(loaded.theta.data == model.theta.data);
}

TEST_CASE("small planted corpus is recovered after matching") {
    SynthSpec spec;
    spec.seed = 8;
    spec.vocab_size = 50;
    spec.topics = 3;
    spec.docs = 120;
    spec.tokens_per_doc = 60;
    spec.theta_alpha = 0.15;
    spec.phi_concentration = 0.05;
    auto corpus = generate_lda_corpus(spec);

    LdaConfig cfg;
    cfg.topics = 3;
    cfg.alpha = 0.5;
    cfg.beta = 0.01;
    cfg.iterations = 200;
    cfg.burn_in = 100;
    cfg.sample_every = 10;
    cfg.seed = 4;
    auto model = fit_gibbs(corpus.docs, corpus.vocab, cfg);
    auto match = match_topics(model.phi, corpus.true_phi);
    CHECK(match.mean_cosine >= 0.7);

    // the diagnostic trace improves from random init to the fitted state
    REQUIRE(model.ll_trace.size() >= 2);
    CHECK(model.ll_trace.back() > model.ll_trace.front());
}
