#ifndef TRAITTOPICS_TRAIT_MODEL_HPP
#define TRAITTOPICS_TRAIT_MODEL_HPP

#include "traittopics/lda.hpp"

#include <array>
#include <filesystem>
#include <utility>

// Dichotomy splits and trait word lists: the corpus is partitioned along
// one MBTI axis, an independent LDA is fitted per side, and each side's
// topics are pooled into a single weighted ranking of words unique to it.

namespace traittopics {

enum class Axis { Attitude, Perceiving, Judging, Lifestyle };

inline constexpr std::array<Axis, 4> kAxes = {Axis::Attitude, Axis::Perceiving, Axis::Judging,
                                              Axis::Lifestyle};

// Trait codes in canonical order E I S N T F J P.
inline constexpr std::array<char, 8> kTraitCodes = {'E', 'I', 'S', 'N', 'T', 'F', 'J', 'P'};

int axis_position(Axis axis);          // letter position within a label
char axis_left_trait(Axis axis);       // E, S, T, J
char axis_right_trait(Axis axis);      // I, N, F, P
const char* axis_name(Axis axis);      // "attitude", ...
Axis axis_of_trait(char trait);
bool label_has_trait(const std::string& label, char trait);

struct TraitWordList {
    char trait = '?';
    std::vector<std::string> source_sections;
    WordList list;
};

using TraitWordLists = std::array<TraitWordList, 8>;  // kTraitCodes order

// Partition by the axis letter of each profile's label. Every profile must
// be labeled; order is preserved within halves.
std::pair<ProfileSet, ProfileSet> split_by_dichotomy(const ProfileSet& set, Axis axis);

// Per side: fit LDA on that side's sectioned text, rank words by pooled
// expected corpus mass sum_k p(k) phi_kw, drop any word whose pooled mass on
// the opposite side is at least as high, drop excluded words, keep top_k.
// Both sides of an axis run with the same derived seed, so identical text on
// the two sides yields identical masses and empty lists.
std::pair<TraitWordList, TraitWordList> trait_word_lists(
    const ProfileSet& set, Axis axis, const std::vector<std::string>& sections,
    const LdaConfig& lda_cfg, const TokenConfig& tok, const Lexicon& exclude, int top_k);

// All four axes; deterministic given lda_cfg.seed.
TraitWordLists all_trait_lists(const ProfileSet& set, const std::vector<std::string>& sections,
                               const LdaConfig& lda_cfg, const TokenConfig& tok,
                               const Lexicon& exclude, int top_k);

// CSV with columns trait,rank,word,weight.
std::string word_list_to_csv(const TraitWordList& list);
TraitWordList word_list_from_csv(const std::string& text);
void save_word_list(const TraitWordList& list, const std::filesystem::path& path);
TraitWordList load_word_list(const std::filesystem::path& path);

// Directory layout used by the pipeline: trait_E.csv .. trait_P.csv.
void save_trait_lists(const TraitWordLists& lists, const std::filesystem::path& dir);
TraitWordLists load_trait_lists(const std::filesystem::path& dir);

// Markdown grid, one column per trait, top n rows.
std::string render_trait_grid(const TraitWordLists& lists, int top_n);

} // namespace traittopics

#endif
