#ifndef TRAITTOPICS_FEATURES_HPP
#define TRAITTOPICS_FEATURES_HPP

#include "traittopics/trait_model.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

// Per-profile numeric features: linguistic cues, dichotomy ratio features,
// per-sentence word-list features and topic features. Missing values are
// NaN throughout; CSV export writes them as empty cells.

namespace traittopics {

inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

// Ordered (name, value) pairs; NaN marks a missing value.
using FeatureMap = std::vector<std::pair<std::string, double>>;

struct CueLexicons {
    Lexicon self_reference;
    Lexicon positive_emotion;
    Lexicon negative_emotion;
    Lexicon negation;
    Lexicon inclusive;
    Lexicon exclusive;
};

inline constexpr std::array<const char*, 7> kCueFeatureNames = {
    "self_reference_rate", "emotion_word_rate", "negation_rate",    "inclusive_rate",
    "exclusive_rate",      "avg_sentence_len",  "pos_neg_emotion_ratio"};

inline constexpr std::array<const char*, 4> kRatioFeatureNames = {
    "attitude_ratio", "perceiving_ratio", "judging_ratio", "lifestyle_ratio"};

// Rates are lexicon hits normalized by the token total of the requested
// sections. Cue counting runs on unfiltered tokens (no stopword removal, no
// length cutoff): most cue words are function words that any stopword list
// would hide. emotion_word_rate combines the positive and negative lists;
// pos_neg_emotion_ratio is (pos + 1) / (neg + 1). Zero tokens mark every cue
// missing.
FeatureMap linguistic_cues(const Profile& p, const std::vector<std::string>& sections,
                           const CueLexicons& cues, const TokenConfig& tok);

// Per axis: (left-trait list hits + 1) / (right-trait list hits + 1), counting
// token occurrences of list words. list_top_k > 0 restricts each list to its
// first list_top_k entries.
FeatureMap dichotomy_ratio_features(const Profile& p, const std::vector<std::string>& sections,
                                    const TraitWordLists& lists, const TokenConfig& tok,
                                    int list_top_k = 0);

// Per trait: occurrences of the trait's list words divided by the sentence
// count of the requested sections. Feature names are prefix + trait code.
FeatureMap per_sentence_list_features(const Profile& p, const std::vector<std::string>& sections,
                                      const TraitWordLists& lists, const TokenConfig& tok,
                                      const std::string& prefix = "");

// Per topic: occurrences of the topic's top_m words (by phi) among the
// profile's favorites tokens, divided by the favorites token total. A word in
// several topics' top-m counts toward each. Columns topic_0..topic_{K-1}.
FeatureMap topic_features(const Profile& p, const TopicModel& model, int top_m,
                          const TokenConfig& tok);

struct FeatureMatrix {
    std::vector<std::string> profile_ids;
    std::vector<std::string> feature_names;
    Grid<double> values;  // rows follow profile_ids, columns feature_names

    int column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;
};

// A configured feature operation: fixed column names plus a per-profile
// evaluator returning one value per column (NaN = missing).
struct NamedFeatureOp {
    std::vector<std::string> columns;
    std::function<std::vector<double>(const Profile&)> eval;
};

NamedFeatureOp cues_op(const std::vector<std::string>& sections, const CueLexicons& cues,
                       const TokenConfig& tok);
NamedFeatureOp ratios_op(const std::vector<std::string>& sections, const TraitWordLists& lists,
                         const TokenConfig& tok, int list_top_k = 0);
NamedFeatureOp per_sentence_op(const std::vector<std::string>& sections,
                               const TraitWordLists& lists, const TokenConfig& tok,
                               const std::string& prefix);
NamedFeatureOp topics_op(const TopicModel& model, int top_m, const TokenConfig& tok);

// One row per profile, columns concatenated over ops. Duplicate column
// names are an error.
FeatureMatrix assemble_matrix(const ProfileSet& set, const std::vector<NamedFeatureOp>& ops);

// Header row, first column profile_id, missing values as empty cells.
std::string matrix_to_csv(const FeatureMatrix& m);
void save_matrix_csv(const FeatureMatrix& m, const std::filesystem::path& path);

} // namespace traittopics

#endif
