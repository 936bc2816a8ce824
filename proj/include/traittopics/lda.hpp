#ifndef TRAITTOPICS_LDA_HPP
#define TRAITTOPICS_LDA_HPP

#include "traittopics/corpus.hpp"
#include "traittopics/util.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

// Latent Dirichlet allocation by collapsed Gibbs sampling.
//
// Inference is single-threaded per chain and fully deterministic for a
// given seed. phi/theta are count-based estimates averaged over
// post-burn-in sweeps at sample_every cadence.

namespace traittopics {

struct LdaConfig {
    int topics = 10;
    double alpha = 5.0;       // symmetric document-topic prior
    double beta = 0.01;       // symmetric topic-word prior
    int iterations = 1000;    // total Gibbs sweeps
    int burn_in = 500;        // sweeps before estimates are averaged
    int sample_every = 10;    // averaging cadence after burn-in
    std::uint64_t seed = 0;

    // Throws DataError on an invalid combination.
    void validate() const;
};

struct TopicModel {
    LdaConfig config;
    Vocabulary vocab;
    Grid<double> phi;    // topics x V, rows sum to 1
    Grid<double> theta;  // docs x topics, rows sum to 1

    // Final-sweep sampler state. Empty on a model loaded from JSON.
    std::vector<std::vector<std::int32_t>> assignments;  // per doc, per token
    Grid<std::int32_t> count_topic_word;                 // topics x V
    Grid<std::int32_t> count_doc_topic;                  // docs x topics
    std::vector<std::int32_t> count_topic;               // tokens per topic
    std::vector<std::int32_t> count_doc;                 // tokens per doc

    // Corpus log-likelihood under instantaneous count estimates, recorded
    // every 10th sweep and at the final sweep.
    std::vector<double> ll_trace;
};

struct WordEntry {
    std::string word;
    double weight = 0.0;

    bool operator==(const WordEntry&) const = default;
};

// Weighted word ranking, weights nonincreasing.
using WordList = std::vector<WordEntry>;

// Collapsed Gibbs fit. Every document must contain at least one token.
// Token topics are resampled from
//   p(z = k) prop. (n_dk + alpha) * (n_kw + beta) / (n_k + V beta)
// with the token's own count excluded.
TopicModel fit_gibbs(const std::vector<Bow>& docs, const Vocabulary& vocab,
                     const LdaConfig& cfg);

// Sum over tokens of log( sum_k theta_dk * phi_kw ).
double log_likelihood(const TopicModel& model, const std::vector<Bow>& docs);

// Highest-phi words of one topic after dropping excluded words.
// Ties break lexicographically; fewer than k survivors yield a short list.
WordList top_words(const TopicModel& model, int topic, int k, const Lexicon& exclude);

// Fraction of corpus tokens each topic explains under the fitted model:
//   p(k) = sum_d (n_d / N) * theta_dk.
std::vector<double> topic_shares(const TopicModel& model);

// Single JSON document: config, vocabulary in id order, dense phi/theta.
// Probabilities round-trip exactly. Sampler state is not serialized.
std::string model_to_json(const TopicModel& model);
TopicModel model_from_json(const std::string& text);
void save_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_model(const std::filesystem::path& path);

} // namespace traittopics

#endif
