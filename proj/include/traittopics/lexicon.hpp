#ifndef TRAITTOPICS_LEXICON_HPP
#define TRAITTOPICS_LEXICON_HPP

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace traittopics {

// A named set of lowercase tokens. Stopword lists, cue word lists and the
// MBTI exclusion list all use this shape; files are one word per line with
// '#' comment lines.
struct Lexicon {
    std::string name;
    std::unordered_set<std::string> words;

    bool contains(const std::string& w) const { return words.count(w) != 0; }
    bool empty() const { return words.empty(); }
    std::size_t size() const { return words.size(); }
};

Lexicon make_lexicon(std::string name, std::vector<std::string> words);

// Loads a lexicon file. Entries are lowercased; an entry with internal
// whitespace is an error.
Lexicon load_lexicon(const std::filesystem::path& path);

} // namespace traittopics

#endif
