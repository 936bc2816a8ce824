#ifndef TRAITTOPICS_CORPUS_HPP
#define TRAITTOPICS_CORPUS_HPP

#include "traittopics/lexicon.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

// Sectioned profile documents: loading, tokenization, sentence splitting,
// vocabulary construction and collocation extraction.

namespace traittopics {

// The nine canonical section names, snake_cased. "favorites" is the
// preference section; the other eight are the personality sections.
inline constexpr std::array<const char*, 9> kSectionNames = {
    "self_summary",
    "what_im_doing_with_my_life",
    "im_really_good_at",
    "the_first_things_people_notice_about_me",
    "favorites",
    "six_things_i_could_never_do_without",
    "on_a_typical_friday_night_i_am",
    "im_looking_for",
    "you_should_message_me_if",
};

inline constexpr const char* kFavoritesSection = "favorites";

// The eight non-favorites section names.
std::vector<std::string> personality_sections();
std::vector<std::string> all_sections();

bool is_valid_section_name(const std::string& name);

// Four-letter code over {E|I}{S|N}{T|F}{J|P}, uppercase.
bool is_valid_mbti_label(const std::string& label);

struct Profile {
    std::string id;
    std::optional<std::string> mbti_label;
    std::map<std::string, std::string> sections;

    bool operator==(const Profile&) const = default;
};

struct ProfileSet {
    std::vector<Profile> profiles;
    std::string provenance;

    std::size_t size() const { return profiles.size(); }
    bool operator==(const ProfileSet& o) const { return profiles == o.profiles; }
};

struct TokenConfig {
    bool lowercase = true;
    bool strip_punctuation = true;
    int min_token_len = 2;
    Lexicon stopwords;
    int min_df = 2;
};

struct Vocabulary {
    std::vector<std::string> words;            // id order
    std::unordered_map<std::string, int> index;
    std::vector<int> doc_freq;                 // parallel to words

    int size() const { return static_cast<int>(words.size()); }
    // -1 when the word is out of vocabulary.
    int id_of(const std::string& w) const {
        auto it = index.find(w);
        return it == index.end() ? -1 : it->second;
    }
};

// Sparse bag of words: (word id, count) sorted by id.
using Bow = std::vector<std::pair<std::int32_t, std::int32_t>>;

// One JSON object per line: {"id": ..., "mbti_label": ...|null, "sections": {...}}.
// Blank lines are skipped. Errors name the offending line or profile id.
ProfileSet load_profiles(const std::filesystem::path& path);
void save_profiles(const ProfileSet& set, const std::filesystem::path& path);
std::string profiles_to_jsonl(const ProfileSet& set);
ProfileSet profiles_from_jsonl(const std::string& text, const std::string& provenance);

// Lowercase/strip per cfg, drop stopwords and tokens shorter than
// min_token_len. Apostrophes inside tokens survive stripping, so
// contractions stay whole.
std::vector<std::string> tokenize(const std::string& text, const TokenConfig& cfg);

// Rule-based split on runs of . ! ? followed by whitespace or end of text.
// A trailing fragment without a terminator is a sentence. Segments are
// trimmed and empties dropped.
std::vector<std::string> segment_sentences(const std::string& text);

// Tokens of the requested sections of one profile, section order as given.
std::vector<std::string> profile_tokens(const Profile& p,
                                        const std::vector<std::string>& sections,
                                        const TokenConfig& cfg);

// Sentences of the requested sections, segmented per section.
std::vector<std::string> profile_sentences(const Profile& p,
                                           const std::vector<std::string>& sections);

// Vocabulary over the union of tokens from the requested sections of every
// profile, filtered by cfg.min_df. Word ids are assigned by descending
// corpus frequency, ties lexicographic, so fitted models are reproducible.
Vocabulary build_vocabulary(const ProfileSet& set,
                            const std::vector<std::string>& sections,
                            const TokenConfig& cfg);

Bow to_bow(const Profile& p, const std::vector<std::string>& sections,
           const Vocabulary& vocab, const TokenConfig& cfg);

std::string vocabulary_to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const std::string& text);

struct Collocation {
    std::string ngram;  // tokens joined by single spaces
    double pmi = 0.0;
};

// Adjacent n-gram PMI within sentences of one section across the whole set:
//   PMI(w1..wn) = log( p(w1..wn) / prod_i p(wi) )
// with n-gram probabilities over adjacent n-gram positions and unigram
// probabilities over all tokens. n-grams seen fewer than min_count times are
// dropped. Sorted by PMI descending, ties lexicographic.
std::vector<Collocation> find_collocations(const ProfileSet& set,
                                           const std::string& section,
                                           int n, int min_count,
                                           const TokenConfig& cfg);

} // namespace traittopics

#endif
