#ifndef TRAITTOPICS_SYNTH_HPP
#define TRAITTOPICS_SYNTH_HPP

#include "traittopics/corpus.hpp"
#include "traittopics/util.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Synthetic corpora with known ground truth: planted topics, planted
// per-trait vocabularies and planted trait-preference correlations. These
// generators are the oracle the rest of the pipeline is verified against.

namespace traittopics {

struct CorrelationTarget {
    char trait = 'E';
    int topic = 0;
    double strength = 0.0;  // in [0,1]; 0 plants nothing
};

struct SynthSpec {
    std::uint64_t seed = 1;

    // favorites topic structure
    int vocab_size = 200;        // V
    int topics = 20;             // K
    int docs = 800;              // D
    int tokens_per_doc = 100;    // favorites and personality section alike
    double theta_alpha = 0.2;    // document-topic Dirichlet prior
    double phi_concentration = 0.08;  // used when true_phi is not given
    std::vector<std::vector<double>> true_phi;  // optional explicit K x V rows

    // planted trait vocabulary in the personality section
    int planted_per_trait = 10;
    double injection = 3.0;  // rate multiplier for matching traits
    std::map<char, std::vector<std::string>> trait_vocab;  // auto-filled when empty
    int base_vocab_size = 200;

    // trait-preference correlation targets
    std::vector<CorrelationTarget> targets;

    // text shape
    int sentence_len = 10;
    double label_leak_rate = 0.1;  // chance per sentence of mentioning the label

    void validate() const;
};

SynthSpec synth_spec_from_json(const std::string& text);
std::string synth_spec_to_json(const SynthSpec& spec);

// The 16 type codes in canonical order.
std::vector<std::string> all_mbti_types();

struct LdaCorpus {
    std::vector<Bow> docs;
    Vocabulary vocab;
    Grid<double> true_phi;    // K x V
    Grid<double> true_theta;  // D x K
};

// Plain LDA generative process: theta_d ~ Dir(alpha), token topics from
// theta_d, words from phi. Deterministic per seed.
LdaCorpus generate_lda_corpus(const SynthSpec& spec);

struct GroundTruth {
    std::uint64_t seed = 0;
    Grid<double> true_phi;
    std::vector<std::string> favorites_vocab;
    std::map<char, std::vector<std::string>> trait_vocab;
    std::vector<CorrelationTarget> targets;
};

struct SynthProfiles {
    ProfileSet profiles;
    GroundTruth truth;
};

// Labeled profile corpus: labels balanced over the 16 types, personality
// text over-samples each side's planted words by the injection multiplier,
// favorites text follows the topic model with theta shifted toward each
// matching correlation target. The planted correlation has a known sign;
// its magnitude is not an oracle.
SynthProfiles generate_profiles(const SynthSpec& spec);

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const std::string& text);

struct MatchResult {
    std::vector<int> permutation;  // permutation[true_topic] = learned topic
    double mean_cosine = 0.0;
};

// Greedy assignment by descending cosine similarity without replacement.
MatchResult match_topics(const Grid<double>& learned_phi, const Grid<double>& true_phi);

// Re-expresses rows over a different vocabulary (0 for absent words), so a
// ground-truth phi can be matched against a model fitted on tokenized text.
Grid<double> project_rows(const Grid<double>& rows, const std::vector<std::string>& words,
                          const Vocabulary& target);

} // namespace traittopics

#endif
