#include "traittopics/lexicon.hpp"

#include "traittopics/errors.hpp"
#include "traittopics/util.hpp"

#include <fstream>

namespace traittopics {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Lexicon make_lexicon(std::string name, std::vector<std::string> words) {
    Lexicon lex;
    lex.name = std::move(name);
    for (auto& w : words) lex.words.insert(lowercase_ascii(w));
    return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon: " + path.string());
    Lexicon lex;
    lex.name = path.stem().string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string entry = trim(line);
        if (entry.empty() || entry[0] == '#') continue;
        if (entry.find_first_of(" \t") != std::string::npos) {
            throw DataError("lexicon " + path.string() + " line " + std::to_string(lineno) +
                            ": entry contains whitespace");
        }
        lex.words.insert(lowercase_ascii(entry));
    }
    return lex;
}

} // namespace traittopics
