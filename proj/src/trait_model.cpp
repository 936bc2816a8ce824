#include "traittopics/trait_model.hpp"

#include "traittopics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace traittopics {

int axis_position(Axis axis) { return static_cast<int>(axis); }

char axis_left_trait(Axis axis) {
    switch (axis) {
        case Axis::Attitude: return 'E';
        case Axis::Perceiving: return 'S';
        case Axis::Judging: return 'T';
        case Axis::Lifestyle: return 'J';
    }
    return '?';
}

char axis_right_trait(Axis axis) {
    switch (axis) {
        case Axis::Attitude: return 'I';
        case Axis::Perceiving: return 'N';
        case Axis::Judging: return 'F';
        case Axis::Lifestyle: return 'P';
    }
    return '?';
}

const char* axis_name(Axis axis) {
    switch (axis) {
        case Axis::Attitude: return "attitude";
        case Axis::Perceiving: return "perceiving";
        case Axis::Judging: return "judging";
        case Axis::Lifestyle: return "lifestyle";
    }
    return "?";
}

Axis axis_of_trait(char trait) {
    switch (trait) {
        case 'E': case 'I': return Axis::Attitude;
        case 'S': case 'N': return Axis::Perceiving;
        case 'T': case 'F': return Axis::Judging;
        case 'J': case 'P': return Axis::Lifestyle;
    }
    throw DataError(std::string("unknown trait code ") + trait);
}

bool label_has_trait(const std::string& label, char trait) {
    Axis axis = axis_of_trait(trait);
    return label.size() == 4 && label[axis_position(axis)] == trait;
}

std::pair<ProfileSet, ProfileSet> split_by_dichotomy(const ProfileSet& set, Axis axis) {
    ProfileSet left, right;
    left.provenance = set.provenance + " [" + std::string(1, axis_left_trait(axis)) + "]";
    right.provenance = set.provenance + " [" + std::string(1, axis_right_trait(axis)) + "]";
    const int pos = axis_position(axis);
    for (const auto& p : set.profiles) {
        if (!p.mbti_label) throw DataError("profile " + p.id + " has no MBTI label");
        if ((*p.mbti_label)[pos] == axis_left_trait(axis)) {
            left.profiles.push_back(p);
        } else {
            right.profiles.push_back(p);
        }
    }
    return {std::move(left), std::move(right)};
}

namespace {

// Pooled expected corpus mass per word: sum_k p(k) * phi_kw.
std::unordered_map<std::string, double> pooled_mass(const TopicModel& model) {
    const auto shares = topic_shares(model);
    std::unordered_map<std::string, double> mass;
    mass.reserve(model.vocab.words.size());
    for (int w = 0; w < model.vocab.size(); ++w) {
        double m = 0.0;
        for (int k = 0; k < model.config.topics; ++k) m += shares[k] * model.phi.at(k, w);
        mass.emplace(model.vocab.words[w], m);
    }
    return mass;
}

TopicModel fit_side(const ProfileSet& side, const std::vector<std::string>& sections,
                    const LdaConfig& cfg, const TokenConfig& tok, char trait) {
    ProfileSet copy;  // drop profiles with no tokens in the requested sections
    for (const auto& p : side.profiles) {
        if (!profile_tokens(p, sections, tok).empty()) copy.profiles.push_back(p);
    }
    if (copy.profiles.empty()) {
        throw DataError(std::string("no usable text for trait ") + trait);
    }
    Vocabulary vocab = build_vocabulary(copy, sections, tok);
    std::vector<Bow> docs;
    docs.reserve(copy.profiles.size());
    for (const auto& p : copy.profiles) {
        Bow bow = to_bow(p, sections, vocab, tok);
        if (!bow.empty()) docs.push_back(std::move(bow));
    }
    if (docs.empty()) throw DataError(std::string("no usable text for trait ") + trait);
    return fit_gibbs(docs, vocab, cfg);
}

} // namespace

std::pair<TraitWordList, TraitWordList> trait_word_lists(
    const ProfileSet& set, Axis axis, const std::vector<std::string>& sections,
    const LdaConfig& lda_cfg, const TokenConfig& tok, const Lexicon& exclude, int top_k) {
    if (top_k < 1) throw DataError("trait_word_lists: top_k must be >= 1");
    auto [left, right] = split_by_dichotomy(set, axis);
    if (left.profiles.empty()) {
        throw DataError(std::string("no profiles for trait ") + axis_left_trait(axis));
    }
    if (right.profiles.empty()) {
        throw DataError(std::string("no profiles for trait ") + axis_right_trait(axis));
    }

    // Same derived seed for both sides: symmetric inputs give symmetric fits.
    LdaConfig cfg = lda_cfg;
    cfg.seed = mix_seed(lda_cfg.seed, static_cast<std::uint64_t>(axis_position(axis)));

    TopicModel left_model = fit_side(left, sections, cfg, tok, axis_left_trait(axis));
    TopicModel right_model = fit_side(right, sections, cfg, tok, axis_right_trait(axis));

    auto left_mass = pooled_mass(left_model);
    auto right_mass = pooled_mass(right_model);

    auto build = [&](char trait, const std::unordered_map<std::string, double>& own,
                     const std::unordered_map<std::string, double>& opposite) {
        TraitWordList out;
        out.trait = trait;
        out.source_sections = sections;
        for (const auto& [word, m] : own) {
            auto it = opposite.find(word);
            if (it != opposite.end() && it->second >= m) continue;  // uniqueness filter
            if (exclude.contains(word)) continue;
            out.list.push_back({word, m});
        }
        std::sort(out.list.begin(), out.list.end(), [](const WordEntry& a, const WordEntry& b) {
            if (a.weight != b.weight) return a.weight > b.weight;
            return a.word < b.word;
        });
        if (static_cast<int>(out.list.size()) > top_k) out.list.resize(top_k);
        return out;
    };

    return {build(axis_left_trait(axis), left_mass, right_mass),
            build(axis_right_trait(axis), right_mass, left_mass)};
}

TraitWordLists all_trait_lists(const ProfileSet& set, const std::vector<std::string>& sections,
                               const LdaConfig& lda_cfg, const TokenConfig& tok,
                               const Lexicon& exclude, int top_k) {
    TraitWordLists lists;
    for (std::size_t a = 0; a < kAxes.size(); ++a) {
        auto [l, r] = trait_word_lists(set, kAxes[a], sections, lda_cfg, tok, exclude, top_k);
        lists[2 * a] = std::move(l);
        lists[2 * a + 1] = std::move(r);
    }
    return lists;
}

// ---------------------------------------------------------------------------
// CSV / markdown export
// ---------------------------------------------------------------------------

std::string word_list_to_csv(const TraitWordList& list) {
    std::string out = "trait,rank,word,weight\n";
    int rank = 1;
    for (const auto& e : list.list) {
        out += list.trait;
        out += ',';
        out += std::to_string(rank++);
        out += ',';
        out += e.word;
        out += ',';
        out += format_double(e.weight);
        out += '\n';
    }
    return out;
}

TraitWordList word_list_from_csv(const std::string& text) {
    TraitWordList out;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("trait,rank,word,weight", 0) != 0) {
        throw DataError("word list CSV: bad header");
    }
    double prev = std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string trait, rank, word, weight;
        if (!std::getline(row, trait, ',') || !std::getline(row, rank, ',') ||
            !std::getline(row, word, ',') || !std::getline(row, weight)) {
            throw DataError("word list CSV: malformed row: " + line);
        }
        if (trait.size() != 1) throw DataError("word list CSV: bad trait code " + trait);
        if (out.trait != '?' && out.trait != trait[0]) {
            throw DataError("word list CSV: mixed trait codes");
        }
        out.trait = trait[0];
        double w = std::stod(weight);
        if (w > prev) throw DataError("word list CSV: weights not nonincreasing");
        prev = w;
        out.list.push_back({word, w});
    }
    return out;
}

void save_word_list(const TraitWordList& list, const std::filesystem::path& path) {
    write_file(path, word_list_to_csv(list));
}

TraitWordList load_word_list(const std::filesystem::path& path) {
    TraitWordList list = word_list_from_csv(read_file(path));
    if (list.trait == '?') {
        // empty list: take the trait code from the file name trait_X.csv
        std::string stem = path.stem().string();
        if (stem.size() == 7 && stem.rfind("trait_", 0) == 0) list.trait = stem[6];
    }
    return list;
}

void save_trait_lists(const TraitWordLists& lists, const std::filesystem::path& dir) {
    for (const auto& l : lists) {
        save_word_list(l, dir / (std::string("trait_") + l.trait + ".csv"));
    }
}

TraitWordLists load_trait_lists(const std::filesystem::path& dir) {
    TraitWordLists lists;
    for (std::size_t i = 0; i < kTraitCodes.size(); ++i) {
        auto path = dir / (std::string("trait_") + kTraitCodes[i] + ".csv");
        if (!std::filesystem::exists(path)) {
            throw DataError("missing trait word list " + path.string());
        }
        lists[i] = load_word_list(path);
        if (lists[i].trait != kTraitCodes[i]) {
            throw DataError("trait code mismatch in " + path.string());
        }
    }
    return lists;
}

std::string render_trait_grid(const TraitWordLists& lists, int top_n) {
    std::string out = "|";
    for (char c : kTraitCodes) out += std::string(" ") + c + " |";
    out += "\n|";
    for (std::size_t i = 0; i < kTraitCodes.size(); ++i) out += "---|";
    out += "\n";
    for (int r = 0; r < top_n; ++r) {
        out += "|";
        for (const auto& l : lists) {
            out += ' ';
            if (r < static_cast<int>(l.list.size())) out += l.list[r].word;
            out += " |";
        }
        out += "\n";
    }
    return out;
}

} // namespace traittopics
