#ifndef TRAITTOPICS_PIPELINE_HPP
#define TRAITTOPICS_PIPELINE_HPP

#include "traittopics/stats.hpp"
#include "traittopics/synth.hpp"

#include <filesystem>
#include <optional>
#include <string>

// Pipeline commands. Stages communicate through files only, so every
// experiment is independently rerunnable and diffable. Each command stages
// its outputs in <out>/.stage and renames them into place on success, writes
// a manifest (config digest, seed, input digests) and guards the output
// directory with a lock file.

namespace traittopics {

// Serializable token settings; the stopword lexicon is loaded from
// lexicon_dir/<stopwords> when a command runs.
struct TokenSettings {
    bool lowercase = true;
    bool strip_punctuation = true;
    int min_token_len = 2;
    int min_df = 2;
    std::string stopwords = "stopwords.txt";
};

struct RunConfig {
    std::filesystem::path corpus;
    std::filesystem::path lexicon_dir = "data/lexicons";
    std::filesystem::path out = "out";
    std::filesystem::path personality_lists;  // dir with trait_E.csv .. trait_P.csv
    std::filesystem::path preference_lists;

    std::uint64_t seed = 1;
    double alpha = 0.05;  // FDR level
    int top_k = 50;       // trait list length
    int top_m = 30;       // words per topic used for topic features
    int list_top_k = 0;   // 0 = full list in ratio features

    TokenSettings token;
    LdaConfig trait_lda{10, 5.0, 0.01, 1000, 500, 10, 0};
    LdaConfig global_lda{20, 2.5, 0.01, 1000, 500, 10, 0};

    // traits command: which sections feed the per-side LDA
    std::vector<std::string> trait_sections = personality_sections();
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& cfg);  // canonical, digested into manifests

TokenConfig make_token_config(const RunConfig& cfg);
CueLexicons load_cue_lexicons(const std::filesystem::path& lexicon_dir);
Lexicon load_exclusion_lexicon(const std::filesystem::path& lexicon_dir);

// synth: corpus.jsonl + truth.json
void run_synth(const SynthSpec& spec, const std::filesystem::path& out);

// traits: trait_E.csv .. trait_P.csv + table1.md
void run_traits(const RunConfig& cfg);

// cue-correlations: features.csv + cue_correlations.csv + cue_correlations.md
// (linguistic cues + the four dichotomy ratios, all pairs corrected together)
void run_cue_correlations(const RunConfig& cfg);

// preference-correlations: features.csv + preference_correlations.csv/.md
// (the eight matched personality-preference pairs)
void run_preference_correlations(const RunConfig& cfg);

// topic-correlations: model.json + features.csv + topic_correlations.csv +
// table4.md (all topics x traits pairs, 20 x 8 at the default K)
void run_topic_correlations(const RunConfig& cfg);

// report: re-render a correlation CSV as markdown
std::string run_report(const std::filesystem::path& report_csv);

// The feature-pair family each command corrects together; exposed for tests.
std::vector<std::pair<std::string, std::string>> cue_feature_family();
std::vector<std::pair<std::string, std::string>> matched_pair_family();
std::vector<std::pair<std::string, std::string>> topic_trait_family(int topics);

} // namespace traittopics

#endif
