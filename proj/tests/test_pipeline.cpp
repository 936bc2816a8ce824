#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "traittopics/errors.hpp"
#include "traittopics/pipeline.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sys/wait.h>

using namespace traittopics;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(make_temp_dir("tt_test_")) {}
    ~TempDir() { fs::remove_all(path); }
};

SynthSpec small_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.seed = seed;
    spec.docs = 96;
    spec.vocab_size = 50;
    spec.topics = 5;
    spec.tokens_per_doc = 40;
    spec.base_vocab_size = 80;
    return spec;
}

RunConfig base_config(const fs::path& tmp) {
    RunConfig cfg;
    cfg.lexicon_dir = fs::path(TT_DATA_DIR) / "lexicons";
    cfg.corpus = tmp / "synth" / "corpus.jsonl";
    cfg.out = tmp / "out";
    cfg.seed = 7;
    cfg.trait_lda.iterations = 60;
    cfg.trait_lda.burn_in = 30;
    cfg.trait_lda.sample_every = 5;
    cfg.trait_lda.topics = 5;
    cfg.global_lda.iterations = 60;
    cfg.global_lda.burn_in = 30;
    cfg.global_lda.sample_every = 5;
    cfg.token.min_df = 2;
    return cfg;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            out[entry.path().filename().string()] = read_file(entry.path());
        }
    }
    return out;
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(TT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("run_synth: outputs, manifest, byte-identical rerun") {
    TempDir tmp;
    auto out = tmp.path / "synth";
    run_synth(small_spec(5), out);
    CHECK(fs::exists(out / "corpus.jsonl"));
    CHECK(fs::exists(out / "truth.json"));
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(!fs::exists(out / ".lock"));
    CHECK(!fs::exists(out / ".stage"));

    auto first = snapshot(out);
    run_synth(small_spec(5), out);
    CHECK(snapshot(out) == first);

    auto set = load_profiles(out / "corpus.jsonl");
    CHECK(set.size() == 96);
}

TEST_CASE("run_traits: eight lists, keyword-free, deterministic") {
    TempDir tmp;
    run_synth(small_spec(5), tmp.path / "synth");
    RunConfig cfg = base_config(tmp.path);
    run_traits(cfg);

    auto exclude = load_exclusion_lexicon(cfg.lexicon_dir);
    int files = 0;
    for (char c : kTraitCodes) {
        auto path = cfg.out / (std::string("trait_") + c + ".csv");
        REQUIRE(fs::exists(path));
        ++files;
        auto list = load_word_list(path);
        CHECK(list.trait == c);
        for (const auto& e : list.list) CHECK(!exclude.contains(e.word));
    }
    CHECK(files == 8);
    CHECK(fs::exists(cfg.out / "table1.md"));

    auto first = snapshot(cfg.out);
    run_traits(cfg);
    CHECK(snapshot(cfg.out) == first);
}

TEST_CASE("run_traits: corpus without favorites still works on profile sections") {
    TempDir tmp;
    run_synth(small_spec(31), tmp.path / "synth");
    auto set = load_profiles(tmp.path / "synth" / "corpus.jsonl");
    for (auto& p : set.profiles) p.sections.erase(kFavoritesSection);
    save_profiles(set, tmp.path / "nofav.jsonl");

    RunConfig cfg = base_config(tmp.path);
    cfg.corpus = tmp.path / "nofav.jsonl";
    run_traits(cfg);  // favorites unused here
    CHECK(fs::exists(cfg.out / "trait_E.csv"));
}

TEST_CASE("run_traits: unlabeled corpus fails with a data error") {
    TempDir tmp;
    fs::create_directories(tmp.path / "synth");
    write_file(tmp.path / "synth" / "corpus.jsonl",
               R"({"id":"a","mbti_label":null,"sections":{"self_summary":"hello there."}})" "\n");
    RunConfig cfg = base_config(tmp.path);
    CHECK_THROWS_AS(run_traits(cfg), DataError);
    CHECK(!fs::exists(cfg.out / "table1.md"));  // nothing committed
    CHECK(!fs::exists(cfg.out / ".lock"));      // lock released
}

TEST_CASE("run_cue_correlations: the full 55-pair family") {
    TempDir tmp;
    run_synth(small_spec(11), tmp.path / "synth");
    RunConfig cfg = base_config(tmp.path);
    run_traits(cfg);

    RunConfig cue = cfg;
    cue.personality_lists = cfg.out;
    cue.out = tmp.path / "cue";
    run_cue_correlations(cue);

    auto results = load_report_csv(cue.out / "cue_correlations.csv");
    CHECK(results.size() == 55);  // C(11,2)
    bool has_att_sent = false, has_att_exc = false;
    for (const auto& r : results) {
        if ((r.feature_a == "attitude_ratio" && r.feature_b == "avg_sentence_len") ||
            (r.feature_b == "attitude_ratio" && r.feature_a == "avg_sentence_len")) {
            has_att_sent = true;
        }
        if ((r.feature_a == "attitude_ratio" && r.feature_b == "exclusive_rate") ||
            (r.feature_b == "attitude_ratio" && r.feature_a == "exclusive_rate")) {
            has_att_exc = true;
        }
    }
    CHECK(has_att_sent);
    CHECK(has_att_exc);
    CHECK(fs::exists(cue.out / "features.csv"));
    CHECK(fs::exists(cue.out / "cue_correlations.md"));
}

TEST_CASE("run_cue_correlations: missing lists fail fast") {
    TempDir tmp;
    run_synth(small_spec(11), tmp.path / "synth");
    RunConfig cue = base_config(tmp.path);
    cue.out = tmp.path / "cue";
    CHECK_THROWS_AS(run_cue_correlations(cue), DataError);  // no lists configured
    cue.personality_lists = tmp.path / "nowhere";
    CHECK_THROWS_AS(run_cue_correlations(cue), DataError);
}

TEST_CASE("run_preference_correlations: exactly the eight matched pairs") {
    TempDir tmp;
    SynthSpec spec = small_spec(13);
    spec.docs = 160;
    spec.targets.push_back({'E', 2, 0.7});
    run_synth(spec, tmp.path / "synth");

    RunConfig cfg = base_config(tmp.path);
    cfg.out = tmp.path / "pers";
    run_traits(cfg);

    RunConfig fav = cfg;
    fav.trait_sections = {kFavoritesSection};
    fav.out = tmp.path / "pref";
    run_traits(fav);

    RunConfig pc = cfg;
    pc.personality_lists = tmp.path / "pers";
    pc.preference_lists = tmp.path / "pref";
    pc.out = tmp.path / "prefcorr";
    run_preference_correlations(pc);

    auto results = load_report_csv(pc.out / "preference_correlations.csv");
    REQUIRE(results.size() == 8);
    for (const auto& r : results) {
        CHECK(r.feature_a.substr(0, 5) == "pers_");
        CHECK(r.feature_b.substr(0, 5) == "pref_");
        CHECK(r.feature_a.back() == r.feature_b.back());
    }
    auto md = read_file(pc.out / "preference_correlations.md");
    CHECK(md.find("| Personality-Preference | r |") == 0);
}

TEST_CASE("run_topic_correlations: K x 8 family and table 4 shape") {
    TempDir tmp;
    run_synth(small_spec(17), tmp.path / "synth");
    RunConfig cfg = base_config(tmp.path);
    run_traits(cfg);

    RunConfig tc = cfg;
    tc.personality_lists = cfg.out;
    tc.out = tmp.path / "topics";
    tc.global_lda.topics = 20;
    run_topic_correlations(tc);

    auto results = load_report_csv(tc.out / "topic_correlations.csv");
    CHECK(results.size() == 160);
    CHECK(fs::exists(tc.out / "model.json"));
    auto model = load_model(tc.out / "model.json");
    CHECK(model.config.topics == 20);
    auto table = read_file(tc.out / "table4.md");
    CHECK(table.find("| Topic | Top Words | Correlated Traits |") == 0);

    // K=1 collapses the family to 8 pairs
    RunConfig k1 = tc;
    k1.out = tmp.path / "topics_k1";
    k1.global_lda.topics = 1;
    run_topic_correlations(k1);
    CHECK(load_report_csv(k1.out / "topic_correlations.csv").size() == 8);
}

TEST_CASE("run_report renders a stored report") {
    TempDir tmp;
    run_synth(small_spec(19), tmp.path / "synth");
    RunConfig cfg = base_config(tmp.path);
    run_traits(cfg);
    RunConfig cue = cfg;
    cue.personality_lists = cfg.out;
    cue.out = tmp.path / "cue";
    run_cue_correlations(cue);

    auto md = run_report(cue.out / "cue_correlations.csv");
    CHECK(md.find("| Feature 1 | Feature 2 | r |") == 0);
}

TEST_CASE("output directory lock blocks concurrent runs") {
    TempDir tmp;
    auto out = tmp.path / "locked";
    fs::create_directories(out);
    write_file(out / ".lock", "");
    CHECK_THROWS_AS(run_synth(small_spec(5), out), DataError);
    fs::remove(out / ".lock");
    run_synth(small_spec(5), out);
    CHECK(fs::exists(out / "corpus.jsonl"));
}

TEST_CASE("config file round trip and precedence") {
    RunConfig cfg;
    cfg.corpus = "/x/corpus.jsonl";
    cfg.seed = 99;
    cfg.alpha = 0.01;
    cfg.trait_lda.topics = 7;
    cfg.token.min_df = 3;
    cfg.trait_sections = {kFavoritesSection};
    auto loaded = run_config_from_json(run_config_to_json(cfg));
    CHECK(loaded.corpus == cfg.corpus);
    CHECK(loaded.seed == 99);
    CHECK(loaded.alpha == 0.01);
    CHECK(loaded.trait_lda.topics == 7);
    CHECK(loaded.token.min_df == 3);
    CHECK(loaded.trait_sections == std::vector<std::string>{"favorites"});

    CHECK_THROWS_AS(run_config_from_json("{nope"), DataError);
    CHECK_THROWS_AS(run_config_from_json(R"({"trait_sections":["bogus"]})"), DataError);
}

TEST_CASE("CLI: exit codes and end-to-end run") {
    TempDir tmp;
    auto synth_out = (tmp.path / "synth").string();

    CHECK(run_cli("synth --out " + synth_out + " --seed 5 --docs 96") == 0);
    CHECK(fs::exists(tmp.path / "synth" / "corpus.jsonl"));

    // usage error: unknown flag
    CHECK(run_cli("synth --bogus 1") == 1);
    CHECK(run_cli("") == 1);  // missing subcommand

    // data error: nonexistent corpus
    auto lex = (fs::path(TT_DATA_DIR) / "lexicons").string();
    CHECK(run_cli("traits --corpus /nonexistent.jsonl --lexicons " + lex + " --out " +
                  (tmp.path / "t").string()) == 2);

    // a small but real traits run through the binary
    std::string cfg_json = std::string("{\"trait_lda\":{\"topics\":4,\"iterations\":40,") +
                           "\"burn_in\":20,\"sample_every\":5}}";
    write_file(tmp.path / "cfg.json", cfg_json);
    CHECK(run_cli("traits --config " + (tmp.path / "cfg.json").string() + " --corpus " +
                  synth_out + "/corpus.jsonl --lexicons " + lex + " --out " +
                  (tmp.path / "lists").string() + " --seed 3") == 0);
    CHECK(fs::exists(tmp.path / "lists" / "trait_E.csv"));
    CHECK(fs::exists(tmp.path / "lists" / "manifest.json"));

    // report for a stored CSV
    RunConfig cue = base_config(tmp.path);
    cue.personality_lists = tmp.path / "lists";
    cue.out = tmp.path / "cue";
    run_cue_correlations(cue);
    CHECK(run_cli("report --in " + (cue.out / "cue_correlations.csv").string()) == 0);
    CHECK(run_cli("report --in /nonexistent.csv") == 2);
}
