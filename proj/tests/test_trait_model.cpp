#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "traittopics/errors.hpp"
#include "traittopics/synth.hpp"
#include "traittopics/trait_model.hpp"

#include <algorithm>
#include <set>

using namespace traittopics;

namespace {

LdaConfig quick_lda(std::uint64_t seed) {
    LdaConfig cfg;
    cfg.topics = 10;
    cfg.alpha = 0.5;
    cfg.beta = 0.01;
    cfg.iterations = 80;
    cfg.burn_in = 40;
    cfg.sample_every = 5;
    cfg.seed = seed;
    return cfg;
}

TokenConfig loose_tok() {
    TokenConfig tok;
    tok.min_df = 1;
    return tok;
}

SynthSpec small_spec(std::uint64_t seed, int docs) {
    SynthSpec spec;
    spec.seed = seed;
    spec.docs = docs;
    spec.vocab_size = 60;
    spec.topics = 5;
    spec.tokens_per_doc = 60;
    spec.base_vocab_size = 100;
    spec.label_leak_rate = 0.0;
    return spec;
}

ProfileSet labeled_set(const std::vector<std::pair<std::string, std::string>>& id_labels) {
    ProfileSet set;
    for (const auto& [id, label] : id_labels) {
        Profile p;
        p.id = id;
        p.mbti_label = label;
        p.sections["self_summary"] = "text for " + id;
        set.profiles.push_back(p);
    }
    return set;
}

std::set<std::string> words_of(const TraitWordList& list) {
    std::set<std::string> out;
    for (const auto& e : list.list) out.insert(e.word);
    return out;
}

} // namespace

TEST_CASE("axis helpers") {
    CHECK(axis_left_trait(Axis::Attitude) == 'E');
    CHECK(axis_right_trait(Axis::Attitude) == 'I');
    CHECK(axis_left_trait(Axis::Lifestyle) == 'J');
    CHECK(axis_position(Axis::Judging) == 2);
    CHECK(axis_of_trait('N') == Axis::Perceiving);
    CHECK(label_has_trait("ENTJ", 'E'));
    CHECK(label_has_trait("ENTJ", 'N'));
    CHECK(!label_has_trait("ENTJ", 'I'));
    CHECK_THROWS_AS(axis_of_trait('X'), DataError);
}

TEST_CASE("split_by_dichotomy: balanced synthetic set splits 400/400") {
    auto synth = generate_profiles(small_spec(1, 800));
    for (Axis axis : kAxes) {
        auto [left, right] = split_by_dichotomy(synth.profiles, axis);
        CHECK(left.size() == 400);
        CHECK(right.size() == 400);
    }
}

TEST_CASE("split_by_dichotomy: degenerate and error cases") {
    auto all_entj = labeled_set({{"a", "ENTJ"}, {"b", "ENTJ"}, {"c", "ENTJ"}});
    auto [left, right] = split_by_dichotomy(all_entj, Axis::Attitude);
    CHECK(left.size() == 3);
    CHECK(right.size() == 0);

    ProfileSet empty;
    auto [el, er] = split_by_dichotomy(empty, Axis::Attitude);
    CHECK(el.size() == 0);
    CHECK(er.size() == 0);

    ProfileSet unlabeled;
    Profile p;
    p.id = "nolabel";
    unlabeled.profiles.push_back(p);
    try {
        split_by_dichotomy(unlabeled, Axis::Attitude);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("nolabel") != std::string::npos);
    }
}

TEST_CASE("split_by_dichotomy: partition property on every axis") {
    auto synth = generate_profiles(small_spec(3, 96));
    for (Axis axis : kAxes) {
        auto [left, right] = split_by_dichotomy(synth.profiles, axis);
        CHECK(left.size() + right.size() == synth.profiles.size());
        std::set<std::string> ids;
        for (const auto& p : left.profiles) ids.insert(p.id);
        for (const auto& p : right.profiles) CHECK(ids.count(p.id) == 0);
        // order preserved within halves
        for (std::size_t i = 1; i < left.profiles.size(); ++i) {
            CHECK(left.profiles[i - 1].id < left.profiles[i].id);
        }
    }
}

TEST_CASE("trait_word_lists: planted vocabulary lands on the right side") {
    SynthSpec spec = small_spec(11, 200);
    spec.trait_vocab['E'] = {"beer", "sports"};
    spec.trait_vocab['I'] = {"quiet", "books"};
    spec.injection = 3.0;
    auto synth = generate_profiles(spec);

    auto [e_list, i_list] = trait_word_lists(synth.profiles, Axis::Attitude, {"self_summary"},
                                             quick_lda(5), loose_tok(), Lexicon{}, 30);
    CHECK(e_list.trait == 'E');
    CHECK(i_list.trait == 'I');
    auto e_words = words_of(e_list);
    auto i_words = words_of(i_list);
    CHECK(e_words.count("beer"));
    CHECK(e_words.count("sports"));
    CHECK(i_words.count("quiet"));
    CHECK(i_words.count("books"));
    for (const auto& w : {"beer", "sports", "quiet", "books"}) {
        CHECK(!(e_words.count(w) && i_words.count(w)));
    }
    // weights nonincreasing
    for (std::size_t i = 1; i < e_list.list.size(); ++i) {
        CHECK(e_list.list[i - 1].weight >= e_list.list[i].weight);
    }
}

TEST_CASE("trait_word_lists: identical text on both sides gives empty lists") {
    std::vector<std::pair<std::string, std::string>> rows;
    const std::vector<std::string> texts = {"alpha beta gamma. delta beta.",
                                            "gamma gamma epsilon. alpha.",
                                            "delta epsilon beta gamma."};
    ProfileSet set;
    for (int side = 0; side < 2; ++side) {
        for (std::size_t i = 0; i < texts.size(); ++i) {
            Profile p;
            p.id = (side == 0 ? "e" : "i") + std::to_string(i);
            p.mbti_label = side == 0 ? "ENTJ" : "INTJ";
            p.sections["self_summary"] = texts[i];
            set.profiles.push_back(p);
        }
    }
    auto [e_list, i_list] = trait_word_lists(set, Axis::Attitude, {"self_summary"}, quick_lda(2),
                                             loose_tok(), Lexicon{}, 30);
    CHECK(e_list.list.empty());
    CHECK(i_list.list.empty());
}

TEST_CASE("trait_word_lists: lists never share a word across one axis") {
    auto synth = generate_profiles(small_spec(17, 160));
    auto [left, right] = trait_word_lists(synth.profiles, Axis::Perceiving, {"self_summary"},
                                          quick_lda(9), loose_tok(), Lexicon{}, 50);
    auto lw = words_of(left);
    for (const auto& w : words_of(right)) CHECK(lw.count(w) == 0);
}

TEST_CASE("trait_word_lists: empty half is an error naming the trait") {
    auto all_entj = labeled_set({{"a", "ENTJ"}, {"b", "ENTJ"}, {"c", "ENTJ"}});
    try {
        trait_word_lists(all_entj, Axis::Attitude, {"self_summary"}, quick_lda(1), loose_tok(),
                         Lexicon{}, 10);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("I") != std::string::npos);
    }
}

TEST_CASE("all_trait_lists: eight lists in canonical order, deterministic") {
    auto synth = generate_profiles(small_spec(23, 96));
    auto lists = all_trait_lists(synth.profiles, {"self_summary"}, quick_lda(7), loose_tok(),
                                 Lexicon{}, 10);
    for (std::size_t i = 0; i < kTraitCodes.size(); ++i) {
        CHECK(lists[i].trait == kTraitCodes[i]);
        CHECK(lists[i].list.size() <= 10);
    }
    auto again = all_trait_lists(synth.profiles, {"self_summary"}, quick_lda(7), loose_tok(),
                                 Lexicon{}, 10);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        CHECK(lists[i].list == again[i].list);
    }
}

TEST_CASE("label tokens never reach the lists under the default exclusion") {
    SynthSpec spec = small_spec(29, 160);
    spec.label_leak_rate = 1.0;  // every sentence mentions the label
    auto synth = generate_profiles(spec);
    auto exclude = load_lexicon(std::filesystem::path(TT_DATA_DIR) / "lexicons" /
                                "mbti_exclude.txt");
    auto lists = all_trait_lists(synth.profiles, {"self_summary"}, quick_lda(3), loose_tok(),
                                 exclude, 50);
    for (const auto& list : lists) {
        for (const auto& e : list.list) {
            CHECK(!exclude.contains(e.word));
        }
    }

    // without the exclusion the label tokens do show up, so the filter is load-bearing
    auto unfiltered = all_trait_lists(synth.profiles, {"self_summary"}, quick_lda(3), loose_tok(),
                                      Lexicon{}, 50);
    bool saw_code = false;
    for (const auto& list : unfiltered) {
        for (const auto& e : list.list) {
            if (exclude.contains(e.word)) saw_code = true;
        }
    }
    CHECK(saw_code);
}

TEST_CASE("planted-word recall at desk scale") {
    SynthSpec spec = small_spec(41, 800);
    spec.planted_per_trait = 10;
    spec.injection = 3.0;
    auto synth = generate_profiles(spec);
    auto lists = all_trait_lists(synth.profiles, {"self_summary"}, quick_lda(13), loose_tok(),
                                 Lexicon{}, 20);
    for (const auto& list : lists) {
        const auto& planted = synth.truth.trait_vocab.at(list.trait);
        auto top = words_of(list);
        int hit = 0;
        for (const auto& w : planted) {
            if (top.count(w)) ++hit;
        }
        CHECK(static_cast<double>(hit) / static_cast<double>(planted.size()) >= 0.7);
    }
}

TEST_CASE("word list CSV round trip and trait grid") {
    TraitWordList list;
    list.trait = 'E';
    list.source_sections = {"self_summary"};
    list.list = {{"beer", 0.125}, {"wine", 0.0625}, {"running", 0.03125}};
    auto loaded = word_list_from_csv(word_list_to_csv(list));
    CHECK(loaded.trait == 'E');
    REQUIRE(loaded.list.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(loaded.list[i].word == list.list[i].word);
        CHECK(loaded.list[i].weight == list.list[i].weight);
    }

    CHECK_THROWS_AS(word_list_from_csv("bogus\n"), DataError);
    CHECK_THROWS_AS(word_list_from_csv("trait,rank,word,weight\nE,1,a,0.1\nE,2,b,0.2\n"),
                    DataError);  // weights increase

    TraitWordLists lists;
    for (std::size_t i = 0; i < kTraitCodes.size(); ++i) {
        lists[i].trait = kTraitCodes[i];
        lists[i].list = {{std::string("word") + kTraitCodes[i], 0.5}};
    }
    auto grid = render_trait_grid(lists, 10);
    CHECK(grid.find("| E | I | S | N | T | F | J | P |") == 0);
    CHECK(grid.find("wordE") != std::string::npos);
    CHECK(grid.find("wordP") != std::string::npos);
}
