#include "traittopics/corpus.hpp"

#include "traittopics/errors.hpp"
#include "traittopics/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace traittopics {

using json = nlohmann::json;

std::vector<std::string> personality_sections() {
    std::vector<std::string> out;
    for (const char* s : kSectionNames) {
        if (std::string(s) != kFavoritesSection) out.emplace_back(s);
    }
    return out;
}

std::vector<std::string> all_sections() {
    return std::vector<std::string>(kSectionNames.begin(), kSectionNames.end());
}

bool is_valid_section_name(const std::string& name) {
    for (const char* s : kSectionNames) {
        if (name == s) return true;
    }
    return false;
}

bool is_valid_mbti_label(const std::string& label) {
    if (label.size() != 4) return false;
    return (label[0] == 'E' || label[0] == 'I') && (label[1] == 'S' || label[1] == 'N') &&
           (label[2] == 'T' || label[2] == 'F') && (label[3] == 'J' || label[3] == 'P');
}

// ---------------------------------------------------------------------------
// JSONL corpus I/O
// ---------------------------------------------------------------------------

namespace {

Profile profile_from_json(const json& j, std::size_t lineno) {
    if (!j.is_object()) {
        throw DataError("corpus line " + std::to_string(lineno) + ": not a JSON object");
    }
    Profile p;
    if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty()) {
        throw DataError("corpus line " + std::to_string(lineno) + ": missing or empty id");
    }
    p.id = j["id"].get<std::string>();
    if (j.contains("mbti_label") && !j["mbti_label"].is_null()) {
        if (!j["mbti_label"].is_string()) {
            throw DataError("corpus line " + std::to_string(lineno) + ": mbti_label must be a string or null");
        }
        std::string label = j["mbti_label"].get<std::string>();
        if (!is_valid_mbti_label(label)) {
            throw DataError("invalid MBTI label at id " + p.id);
        }
        p.mbti_label = label;
    }
    if (j.contains("sections")) {
        if (!j["sections"].is_object()) {
            throw DataError("corpus line " + std::to_string(lineno) + ": sections must be an object");
        }
        for (auto it = j["sections"].begin(); it != j["sections"].end(); ++it) {
            if (!is_valid_section_name(it.key())) {
                throw DataError("unknown section \"" + it.key() + "\" at id " + p.id);
            }
            if (!it.value().is_string()) {
                throw DataError("section \"" + it.key() + "\" at id " + p.id + " is not a string");
            }
            p.sections[it.key()] = it.value().get<std::string>();
        }
    }
    return p;
}

json profile_to_json(const Profile& p) {
    json j;
    j["id"] = p.id;
    if (p.mbti_label) {
        j["mbti_label"] = *p.mbti_label;
    } else {
        j["mbti_label"] = nullptr;
    }
    j["sections"] = json::object();
    for (const auto& [name, text] : p.sections) j["sections"][name] = text;
    return j;
}

} // namespace

ProfileSet profiles_from_jsonl(const std::string& text, const std::string& provenance) {
    ProfileSet set;
    set.provenance = provenance;
    std::unordered_set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            throw DataError("corpus line " + std::to_string(lineno) + ": malformed JSON");
        }
        Profile p = profile_from_json(j, lineno);
        if (!seen.insert(p.id).second) {
            throw DataError("duplicate profile id " + p.id);
        }
        set.profiles.push_back(std::move(p));
    }
    return set;
}

ProfileSet load_profiles(const std::filesystem::path& path) {
    return profiles_from_jsonl(read_file(path), path.string());
}

std::string profiles_to_jsonl(const ProfileSet& set) {
    std::string out;
    for (const auto& p : set.profiles) {
        out += profile_to_json(p).dump();
        out += '\n';
    }
    return out;
}

void save_profiles(const ProfileSet& set, const std::filesystem::path& path) {
    write_file(path, profiles_to_jsonl(set));
}

// ---------------------------------------------------------------------------
// Tokenization and sentence segmentation
// ---------------------------------------------------------------------------

namespace {

inline bool is_token_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '\'' || u >= 0x80;
}

inline bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

std::string trim_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<std::string> tokenize(const std::string& text, const TokenConfig& cfg) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        std::string tok = std::move(cur);
        cur.clear();
        if (cfg.strip_punctuation) {
            // leading/trailing apostrophes are quote marks, not contractions
            std::size_t b = tok.find_first_not_of('\'');
            if (b == std::string::npos) return;
            std::size_t e = tok.find_last_not_of('\'');
            tok = tok.substr(b, e - b + 1);
        }
        if (static_cast<int>(tok.size()) < cfg.min_token_len) return;
        if (cfg.stopwords.contains(tok)) return;
        tokens.push_back(std::move(tok));
    };
    for (char c : text) {
        char ch = c;
        if (cfg.lowercase && ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
        bool keep = cfg.strip_punctuation ? is_token_char(ch)
                                          : std::isspace(static_cast<unsigned char>(ch)) == 0;
        if (keep) {
            cur.push_back(ch);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> segment_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    std::size_t i = 0;
    auto flush = [&](std::size_t end) {
        std::string seg = trim_ws(text.substr(start, end - start));
        if (!seg.empty()) sentences.push_back(std::move(seg));
    };
    while (i < text.size()) {
        if (is_terminator(text[i])) {
            std::size_t j = i;
            while (j < text.size() && is_terminator(text[j])) ++j;
            if (j == text.size() || std::isspace(static_cast<unsigned char>(text[j])) != 0) {
                flush(i);
                start = j;
            }
            i = j;
        } else {
            ++i;
        }
    }
    flush(text.size());
    return sentences;
}

std::vector<std::string> profile_tokens(const Profile& p,
                                        const std::vector<std::string>& sections,
                                        const TokenConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& name : sections) {
        auto it = p.sections.find(name);
        if (it == p.sections.end()) continue;
        auto toks = tokenize(it->second, cfg);
        out.insert(out.end(), std::make_move_iterator(toks.begin()),
                   std::make_move_iterator(toks.end()));
    }
    return out;
}

std::vector<std::string> profile_sentences(const Profile& p,
                                           const std::vector<std::string>& sections) {
    std::vector<std::string> out;
    for (const auto& name : sections) {
        auto it = p.sections.find(name);
        if (it == p.sections.end()) continue;
        auto sents = segment_sentences(it->second);
        out.insert(out.end(), std::make_move_iterator(sents.begin()),
                   std::make_move_iterator(sents.end()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

Vocabulary build_vocabulary(const ProfileSet& set,
                            const std::vector<std::string>& sections,
                            const TokenConfig& cfg) {
    std::unordered_map<std::string, int> term_freq;
    std::unordered_map<std::string, int> doc_freq;
    for (const auto& p : set.profiles) {
        auto toks = profile_tokens(p, sections, cfg);
        std::unordered_set<std::string> uniq;
        for (auto& t : toks) {
            ++term_freq[t];
            uniq.insert(std::move(t));
        }
        for (const auto& t : uniq) ++doc_freq[t];
    }
    std::vector<std::pair<std::string, int>> kept;
    for (const auto& [word, df] : doc_freq) {
        if (df >= cfg.min_df) kept.emplace_back(word, term_freq[word]);
    }
    if (kept.empty()) throw DataError("no tokens after filtering");
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocabulary vocab;
    vocab.words.reserve(kept.size());
    vocab.doc_freq.reserve(kept.size());
    for (auto& [word, tf] : kept) {
        vocab.index.emplace(word, static_cast<int>(vocab.words.size()));
        vocab.doc_freq.push_back(doc_freq[word]);
        vocab.words.push_back(std::move(word));
    }
    return vocab;
}

Bow to_bow(const Profile& p, const std::vector<std::string>& sections,
           const Vocabulary& vocab, const TokenConfig& cfg) {
    std::unordered_map<int, int> counts;
    for (const auto& t : profile_tokens(p, sections, cfg)) {
        int id = vocab.id_of(t);
        if (id >= 0) ++counts[id];
    }
    Bow bow(counts.begin(), counts.end());
    std::sort(bow.begin(), bow.end());
    return bow;
}

std::string vocabulary_to_json(const Vocabulary& vocab) {
    json j;
    j["words"] = vocab.words;
    j["doc_freq"] = vocab.doc_freq;
    return j.dump();
}

Vocabulary vocabulary_from_json(const std::string& text) {
    json j = json::parse(text);
    Vocabulary vocab;
    vocab.words = j.at("words").get<std::vector<std::string>>();
    vocab.doc_freq = j.at("doc_freq").get<std::vector<int>>();
    if (vocab.doc_freq.size() != vocab.words.size()) {
        throw DataError("vocabulary JSON: words and doc_freq lengths differ");
    }
    for (std::size_t i = 0; i < vocab.words.size(); ++i) {
        if (!vocab.index.emplace(vocab.words[i], static_cast<int>(i)).second) {
            throw DataError("vocabulary JSON: duplicate word " + vocab.words[i]);
        }
    }
    return vocab;
}

// ---------------------------------------------------------------------------
// Collocations
// ---------------------------------------------------------------------------

std::vector<Collocation> find_collocations(const ProfileSet& set,
                                           const std::string& section,
                                           int n, int min_count,
                                           const TokenConfig& cfg) {
    if (n != 2 && n != 3) throw DataError("collocation order must be 2 or 3");
    if (min_count < 1) throw DataError("min_count must be >= 1");

    std::unordered_map<std::string, long> unigram;
    std::unordered_map<std::string, long> ngram;
    long total_tokens = 0;
    long total_ngrams = 0;
    bool section_seen = false;

    for (const auto& p : set.profiles) {
        auto it = p.sections.find(section);
        if (it == p.sections.end()) continue;
        section_seen = true;
        for (const auto& sent : segment_sentences(it->second)) {
            auto toks = tokenize(sent, cfg);
            total_tokens += static_cast<long>(toks.size());
            for (const auto& t : toks) ++unigram[t];
            if (static_cast<int>(toks.size()) < n) continue;
            for (std::size_t i = 0; i + n <= toks.size(); ++i) {
                std::string key = toks[i];
                for (int k = 1; k < n; ++k) {
                    key += ' ';
                    key += toks[i + k];
                }
                ++ngram[key];
                ++total_ngrams;
            }
        }
    }
    if (!section_seen) throw DataError("section \"" + section + "\" absent from all profiles");

    std::vector<Collocation> out;
    if (total_ngrams == 0) return out;
    for (const auto& [key, count] : ngram) {
        if (count < min_count) continue;
        double log_joint = std::log(static_cast<double>(count) / static_cast<double>(total_ngrams));
        double log_indep = 0.0;
        std::size_t b = 0;
        for (int k = 0; k < n; ++k) {
            std::size_t e = key.find(' ', b);
            std::string w = key.substr(b, e == std::string::npos ? e : e - b);
            log_indep += std::log(static_cast<double>(unigram.at(w)) /
                                  static_cast<double>(total_tokens));
            b = e + 1;
        }
        out.push_back({key, log_joint - log_indep});
    }
    std::sort(out.begin(), out.end(), [](const Collocation& a, const Collocation& b) {
        if (a.pmi != b.pmi) return a.pmi > b.pmi;
        return a.ngram < b.ngram;
    });
    return out;
}

} // namespace traittopics
