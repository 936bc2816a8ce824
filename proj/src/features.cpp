#include "traittopics/features.hpp"

#include "traittopics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>
#include <unordered_set>

namespace traittopics {

namespace {

// Tokenizer for cue counting: keeps stopwords and single-character tokens
// so that self references ("i") and negations survive.
TokenConfig counting_config(const TokenConfig& tok) {
    TokenConfig cfg = tok;
    cfg.stopwords = Lexicon{};
    cfg.min_token_len = 1;
    return cfg;
}

bool any_section_present(const Profile& p, const std::vector<std::string>& sections) {
    for (const auto& s : sections) {
        if (p.sections.count(s)) return true;
    }
    return false;
}

// word -> trait indices whose list contains it (a word may sit on lists of
// different axes, never on both sides of one axis).
std::unordered_map<std::string, std::vector<int>> list_membership(const TraitWordLists& lists,
                                                                  int list_top_k) {
    std::unordered_map<std::string, std::vector<int>> member;
    for (std::size_t t = 0; t < lists.size(); ++t) {
        std::size_t limit = list_top_k > 0
                                ? std::min<std::size_t>(list_top_k, lists[t].list.size())
                                : lists[t].list.size();
        for (std::size_t i = 0; i < limit; ++i) {
            member[lists[t].list[i].word].push_back(static_cast<int>(t));
        }
    }
    return member;
}

std::array<long, 8> count_list_hits(const std::vector<std::string>& tokens,
                                    const std::unordered_map<std::string, std::vector<int>>& member) {
    std::array<long, 8> hits{};
    for (const auto& t : tokens) {
        auto it = member.find(t);
        if (it == member.end()) continue;
        for (int idx : it->second) ++hits[idx];
    }
    return hits;
}

} // namespace

FeatureMap linguistic_cues(const Profile& p, const std::vector<std::string>& sections,
                           const CueLexicons& cues, const TokenConfig& tok) {
    FeatureMap out;
    for (const char* name : kCueFeatureNames) out.emplace_back(name, missing_value());
    if (!any_section_present(p, sections)) return out;

    const TokenConfig cfg = counting_config(tok);
    auto sentences = profile_sentences(p, sections);
    long total = 0;
    long self_ref = 0, pos = 0, neg = 0, negation = 0, inclusive = 0, exclusive = 0;
    for (const auto& sent : sentences) {
        for (const auto& t : tokenize(sent, cfg)) {
            ++total;
            if (cues.self_reference.contains(t)) ++self_ref;
            if (cues.positive_emotion.contains(t)) ++pos;
            if (cues.negative_emotion.contains(t)) ++neg;
            if (cues.negation.contains(t)) ++negation;
            if (cues.inclusive.contains(t)) ++inclusive;
            if (cues.exclusive.contains(t)) ++exclusive;
        }
    }
    if (total == 0) return out;

    const double n = static_cast<double>(total);
    out[0].second = self_ref / n;
    out[1].second = (pos + neg) / n;
    out[2].second = negation / n;
    out[3].second = inclusive / n;
    out[4].second = exclusive / n;
    out[5].second = n / static_cast<double>(sentences.size());
    out[6].second = (pos + 1.0) / (neg + 1.0);
    return out;
}

FeatureMap dichotomy_ratio_features(const Profile& p, const std::vector<std::string>& sections,
                                    const TraitWordLists& lists, const TokenConfig& tok,
                                    int list_top_k) {
    FeatureMap out;
    for (const char* name : kRatioFeatureNames) out.emplace_back(name, missing_value());
    auto tokens = profile_tokens(p, sections, tok);
    if (tokens.empty()) return out;

    auto member = list_membership(lists, list_top_k);
    auto hits = count_list_hits(tokens, member);
    // kTraitCodes pairs: (E,I) (S,N) (T,F) (J,P)
    for (int a = 0; a < 4; ++a) {
        out[a].second = (hits[2 * a] + 1.0) / (hits[2 * a + 1] + 1.0);
    }
    return out;
}

FeatureMap per_sentence_list_features(const Profile& p, const std::vector<std::string>& sections,
                                      const TraitWordLists& lists, const TokenConfig& tok,
                                      const std::string& prefix) {
    FeatureMap out;
    for (char c : kTraitCodes) out.emplace_back(prefix + c, missing_value());
    auto sentences = profile_sentences(p, sections);
    if (sentences.empty()) return out;

    auto member = list_membership(lists, 0);
    std::array<long, 8> hits{};
    for (const auto& sent : sentences) {
        auto h = count_list_hits(tokenize(sent, tok), member);
        for (int i = 0; i < 8; ++i) hits[i] += h[i];
    }
    for (int i = 0; i < 8; ++i) {
        out[i].second = static_cast<double>(hits[i]) / static_cast<double>(sentences.size());
    }
    return out;
}

namespace {

// word -> topics whose top-m contains it
std::unordered_map<std::string, std::vector<int>> topic_membership(const TopicModel& model,
                                                                   int top_m) {
    Lexicon no_exclusion;
    std::unordered_map<std::string, std::vector<int>> member;
    for (int k = 0; k < model.config.topics; ++k) {
        for (const auto& e : top_words(model, k, top_m, no_exclusion)) {
            member[e.word].push_back(k);
        }
    }
    return member;
}

std::vector<double> topic_feature_values(
    const Profile& p, const std::unordered_map<std::string, std::vector<int>>& member, int K,
    const TokenConfig& tok) {
    std::vector<double> out(K, missing_value());
    auto it = p.sections.find(kFavoritesSection);
    if (it == p.sections.end()) return out;
    auto tokens = tokenize(it->second, tok);
    if (tokens.empty()) return out;

    std::vector<long> hits(K, 0);
    for (const auto& t : tokens) {
        auto mit = member.find(t);
        if (mit == member.end()) continue;
        for (int k : mit->second) ++hits[k];
    }
    for (int k = 0; k < K; ++k) {
        out[k] = static_cast<double>(hits[k]) / static_cast<double>(tokens.size());
    }
    return out;
}

} // namespace

FeatureMap topic_features(const Profile& p, const TopicModel& model, int top_m,
                          const TokenConfig& tok) {
    const int K = model.config.topics;
    auto vals = topic_feature_values(p, topic_membership(model, top_m), K, tok);
    FeatureMap out;
    for (int k = 0; k < K; ++k) {
        out.emplace_back("topic_" + std::to_string(k), vals[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrix assembly
// ---------------------------------------------------------------------------

int FeatureMatrix::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (feature_names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::vector<double> FeatureMatrix::column(const std::string& name) const {
    int c = column_index(name);
    if (c < 0) throw DataError("unknown feature column " + name);
    std::vector<double> out(values.rows);
    for (std::size_t r = 0; r < values.rows; ++r) out[r] = values.at(r, c);
    return out;
}

namespace {

std::vector<double> map_values(const FeatureMap& m) {
    std::vector<double> v;
    v.reserve(m.size());
    for (const auto& [name, val] : m) v.push_back(val);
    return v;
}

} // namespace

NamedFeatureOp cues_op(const std::vector<std::string>& sections, const CueLexicons& cues,
                       const TokenConfig& tok) {
    NamedFeatureOp op;
    for (const char* n : kCueFeatureNames) op.columns.emplace_back(n);
    op.eval = [sections, cues, tok](const Profile& p) {
        return map_values(linguistic_cues(p, sections, cues, tok));
    };
    return op;
}

NamedFeatureOp ratios_op(const std::vector<std::string>& sections, const TraitWordLists& lists,
                         const TokenConfig& tok, int list_top_k) {
    NamedFeatureOp op;
    for (const char* n : kRatioFeatureNames) op.columns.emplace_back(n);
    op.eval = [sections, lists, tok, list_top_k](const Profile& p) {
        return map_values(dichotomy_ratio_features(p, sections, lists, tok, list_top_k));
    };
    return op;
}

NamedFeatureOp per_sentence_op(const std::vector<std::string>& sections,
                               const TraitWordLists& lists, const TokenConfig& tok,
                               const std::string& prefix) {
    NamedFeatureOp op;
    for (char c : kTraitCodes) op.columns.push_back(prefix + c);
    op.eval = [sections, lists, tok, prefix](const Profile& p) {
        return map_values(per_sentence_list_features(p, sections, lists, tok, prefix));
    };
    return op;
}

NamedFeatureOp topics_op(const TopicModel& model, int top_m, const TokenConfig& tok) {
    NamedFeatureOp op;
    const int K = model.config.topics;
    for (int k = 0; k < K; ++k) {
        op.columns.push_back("topic_" + std::to_string(k));
    }
    // membership resolved once; the op does not hold onto the model
    auto member = std::make_shared<const std::unordered_map<std::string, std::vector<int>>>(
        topic_membership(model, top_m));
    op.eval = [member, K, tok](const Profile& p) {
        return topic_feature_values(p, *member, K, tok);
    };
    return op;
}

FeatureMatrix assemble_matrix(const ProfileSet& set, const std::vector<NamedFeatureOp>& ops) {
    FeatureMatrix m;
    std::unordered_set<std::string> seen;
    for (const auto& op : ops) {
        for (const auto& name : op.columns) {
            if (!seen.insert(name).second) throw DataError("duplicate feature name " + name);
            m.feature_names.push_back(name);
        }
    }
    m.values = Grid<double>(set.profiles.size(), m.feature_names.size(), missing_value());
    m.profile_ids.reserve(set.profiles.size());
    for (std::size_t r = 0; r < set.profiles.size(); ++r) {
        const Profile& p = set.profiles[r];
        m.profile_ids.push_back(p.id);
        std::size_t c = 0;
        for (const auto& op : ops) {
            auto vals = op.eval(p);
            if (vals.size() != op.columns.size()) {
                throw std::logic_error("feature op returned wrong arity");
            }
            for (double v : vals) m.values.at(r, c++) = v;
        }
    }
    return m;
}

std::string matrix_to_csv(const FeatureMatrix& m) {
    std::string out = "profile_id";
    for (const auto& name : m.feature_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t r = 0; r < m.values.rows; ++r) {
        out += m.profile_ids[r];
        for (std::size_t c = 0; c < m.values.cols; ++c) {
            out += ',';
            double v = m.values.at(r, c);
            if (!is_missing(v)) out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

void save_matrix_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
    write_file(path, matrix_to_csv(m));
}

} // namespace traittopics
