#include "traittopics/pipeline.hpp"

#include "traittopics/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>

namespace traittopics {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

namespace {

LdaConfig lda_from_json(const json& j, LdaConfig base) {
    if (j.contains("topics")) base.topics = j["topics"].get<int>();
    if (j.contains("alpha")) base.alpha = j["alpha"].get<double>();
    if (j.contains("beta")) base.beta = j["beta"].get<double>();
    if (j.contains("iterations")) base.iterations = j["iterations"].get<int>();
    if (j.contains("burn_in")) base.burn_in = j["burn_in"].get<int>();
    if (j.contains("sample_every")) base.sample_every = j["sample_every"].get<int>();
    return base;
}

json lda_to_json(const LdaConfig& cfg) {
    return {{"topics", cfg.topics},         {"alpha", cfg.alpha},
            {"beta", cfg.beta},             {"iterations", cfg.iterations},
            {"burn_in", cfg.burn_in},       {"sample_every", cfg.sample_every}};
}

} // namespace

RunConfig run_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("config: malformed JSON: ") + e.what());
    }
    RunConfig cfg;
    if (j.contains("corpus")) cfg.corpus = j["corpus"].get<std::string>();
    if (j.contains("lexicons")) cfg.lexicon_dir = j["lexicons"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("personality_lists")) {
        cfg.personality_lists = j["personality_lists"].get<std::string>();
    }
    if (j.contains("preference_lists")) {
        cfg.preference_lists = j["preference_lists"].get<std::string>();
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("top_k")) cfg.top_k = j["top_k"].get<int>();
    if (j.contains("top_m")) cfg.top_m = j["top_m"].get<int>();
    if (j.contains("list_top_k")) cfg.list_top_k = j["list_top_k"].get<int>();
    if (j.contains("token")) {
        const auto& jt = j["token"];
        if (jt.contains("lowercase")) cfg.token.lowercase = jt["lowercase"].get<bool>();
        if (jt.contains("strip_punctuation")) {
            cfg.token.strip_punctuation = jt["strip_punctuation"].get<bool>();
        }
        if (jt.contains("min_token_len")) cfg.token.min_token_len = jt["min_token_len"].get<int>();
        if (jt.contains("min_df")) cfg.token.min_df = jt["min_df"].get<int>();
        if (jt.contains("stopwords")) cfg.token.stopwords = jt["stopwords"].get<std::string>();
    }
    if (j.contains("trait_lda")) cfg.trait_lda = lda_from_json(j["trait_lda"], cfg.trait_lda);
    if (j.contains("global_lda")) cfg.global_lda = lda_from_json(j["global_lda"], cfg.global_lda);
    if (j.contains("trait_sections")) {
        cfg.trait_sections = j["trait_sections"].get<std::vector<std::string>>();
        for (const auto& s : cfg.trait_sections) {
            if (!is_valid_section_name(s)) throw DataError("config: unknown section " + s);
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    return run_config_from_json(read_file(path));
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["corpus"] = cfg.corpus.string();
    j["lexicons"] = cfg.lexicon_dir.string();
    j["out"] = cfg.out.string();
    j["personality_lists"] = cfg.personality_lists.string();
    j["preference_lists"] = cfg.preference_lists.string();
    j["seed"] = cfg.seed;
    j["alpha"] = cfg.alpha;
    j["top_k"] = cfg.top_k;
    j["top_m"] = cfg.top_m;
    j["list_top_k"] = cfg.list_top_k;
    j["token"] = {{"lowercase", cfg.token.lowercase},
                  {"strip_punctuation", cfg.token.strip_punctuation},
                  {"min_token_len", cfg.token.min_token_len},
                  {"min_df", cfg.token.min_df},
                  {"stopwords", cfg.token.stopwords}};
    j["trait_lda"] = lda_to_json(cfg.trait_lda);
    j["global_lda"] = lda_to_json(cfg.global_lda);
    j["trait_sections"] = cfg.trait_sections;
    return j.dump();
}

TokenConfig make_token_config(const RunConfig& cfg) {
    TokenConfig tok;
    tok.lowercase = cfg.token.lowercase;
    tok.strip_punctuation = cfg.token.strip_punctuation;
    tok.min_token_len = cfg.token.min_token_len;
    tok.min_df = cfg.token.min_df;
    if (!cfg.token.stopwords.empty()) {
        tok.stopwords = load_lexicon(cfg.lexicon_dir / cfg.token.stopwords);
    }
    return tok;
}

CueLexicons load_cue_lexicons(const fs::path& lexicon_dir) {
    CueLexicons cues;
    cues.self_reference = load_lexicon(lexicon_dir / "self_references.txt");
    cues.positive_emotion = load_lexicon(lexicon_dir / "positive_emotion.txt");
    cues.negative_emotion = load_lexicon(lexicon_dir / "negative_emotion.txt");
    cues.negation = load_lexicon(lexicon_dir / "negations.txt");
    cues.inclusive = load_lexicon(lexicon_dir / "inclusive.txt");
    cues.exclusive = load_lexicon(lexicon_dir / "exclusive.txt");
    return cues;
}

Lexicon load_exclusion_lexicon(const fs::path& lexicon_dir) {
    return load_lexicon(lexicon_dir / "mbti_exclude.txt");
}

// ---------------------------------------------------------------------------
// Output staging: lock, stage dir, manifest, commit-by-rename
// ---------------------------------------------------------------------------

namespace {

class OutputStage {
public:
    OutputStage(fs::path out, std::string command, std::uint64_t seed, double alpha,
                std::string config_digest)
        : out_(std::move(out)),
          command_(std::move(command)),
          seed_(seed),
          alpha_(alpha),
          config_digest_(std::move(config_digest)) {
        fs::create_directories(out_);
        lock_path_ = out_ / ".lock";
        std::FILE* f = std::fopen(lock_path_.c_str(), "wx");
        if (f == nullptr) {
            throw DataError("output directory is locked by another run: " + out_.string());
        }
        std::fclose(f);
        locked_ = true;
        stage_ = out_ / ".stage";
        fs::remove_all(stage_);
        fs::create_directories(stage_);
    }

    ~OutputStage() {
        std::error_code ec;
        fs::remove_all(stage_, ec);
        if (locked_) fs::remove(lock_path_, ec);
    }

    OutputStage(const OutputStage&) = delete;
    OutputStage& operator=(const OutputStage&) = delete;

    void add(const std::string& name, std::string_view contents) {
        write_file(stage_ / name, contents);
        files_.push_back(name);
    }

    void add_input(const std::string& name, const fs::path& path) {
        inputs_[name] = fnv1a64_hex(read_file(path));
    }

    void add_input_text(const std::string& name, std::string_view text) {
        inputs_[name] = fnv1a64_hex(text);
    }

    // Writes the manifest, then renames everything into the output
    // directory. Nothing lands in out_ before this point.
    void commit() {
        json manifest;
        manifest["command"] = command_;
        manifest["seed"] = seed_;
        manifest["alpha"] = alpha_;
        manifest["config_digest"] = config_digest_;
        manifest["inputs"] = inputs_;
        std::vector<std::string> sorted = files_;
        std::sort(sorted.begin(), sorted.end());
        manifest["outputs"] = sorted;
        write_file(stage_ / "manifest.json", manifest.dump(2) + "\n");
        files_.push_back("manifest.json");
        for (const auto& name : files_) {
            fs::rename(stage_ / name, out_ / name);
        }
        files_.clear();
    }

private:
    fs::path out_;
    fs::path stage_;
    fs::path lock_path_;
    bool locked_ = false;
    std::string command_;
    std::uint64_t seed_;
    double alpha_;
    std::string config_digest_;
    std::vector<std::string> files_;
    std::map<std::string, std::string> inputs_;
};

ProfileSet load_corpus_checked(const RunConfig& cfg) {
    if (cfg.corpus.empty()) throw DataError("no corpus path configured");
    return load_profiles(cfg.corpus);
}

TraitWordLists load_lists_checked(const fs::path& dir, const char* role) {
    if (dir.empty()) {
        throw DataError(std::string("missing word-list inputs: no ") + role +
                        " list directory configured");
    }
    return load_trait_lists(dir);
}

void add_list_inputs(OutputStage& stage, const std::string& prefix, const fs::path& dir) {
    for (char c : kTraitCodes) {
        std::string name = std::string("trait_") + c + ".csv";
        stage.add_input(prefix + name, dir / name);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

void run_synth(const SynthSpec& spec, const fs::path& out) {
    spec.validate();
    const std::string spec_json = synth_spec_to_json(spec);
    OutputStage stage(out, "synth", spec.seed, 0.0, fnv1a64_hex(spec_json));
    stage.add_input_text("spec", spec_json);

    SynthProfiles synth = generate_profiles(spec);
    stage.add("corpus.jsonl", profiles_to_jsonl(synth.profiles));
    stage.add("truth.json", ground_truth_to_json(synth.truth));
    stage.commit();
}

void run_traits(const RunConfig& cfg) {
    OutputStage stage(cfg.out, "traits", cfg.seed, cfg.alpha,
                      fnv1a64_hex(run_config_to_json(cfg)));
    ProfileSet set = load_corpus_checked(cfg);
    stage.add_input("corpus", cfg.corpus);

    TokenConfig tok = make_token_config(cfg);
    Lexicon exclude = load_exclusion_lexicon(cfg.lexicon_dir);
    LdaConfig lda_cfg = cfg.trait_lda;
    lda_cfg.seed = cfg.seed;

    TraitWordLists lists =
        all_trait_lists(set, cfg.trait_sections, lda_cfg, tok, exclude, cfg.top_k);
    for (const auto& l : lists) {
        stage.add(std::string("trait_") + l.trait + ".csv", word_list_to_csv(l));
    }
    stage.add("table1.md", render_trait_grid(lists, 10));
    stage.commit();
}

void run_cue_correlations(const RunConfig& cfg) {
    OutputStage stage(cfg.out, "cue-correlations", cfg.seed, cfg.alpha,
                      fnv1a64_hex(run_config_to_json(cfg)));
    ProfileSet set = load_corpus_checked(cfg);
    stage.add_input("corpus", cfg.corpus);
    TraitWordLists lists = load_lists_checked(cfg.personality_lists, "personality");
    add_list_inputs(stage, "lists/", cfg.personality_lists);

    TokenConfig tok = make_token_config(cfg);
    CueLexicons cues = load_cue_lexicons(cfg.lexicon_dir);
    const auto sections = personality_sections();

    FeatureMatrix m = assemble_matrix(
        set, {cues_op(sections, cues, tok), ratios_op(sections, lists, tok, cfg.list_top_k)});
    auto results = correlate_matrix(m, cue_feature_family(), cfg.alpha);

    stage.add("features.csv", matrix_to_csv(m));
    stage.add("cue_correlations.csv", report_to_csv(results));
    stage.add("cue_correlations.md", render_report_markdown(results));
    stage.commit();
}

void run_preference_correlations(const RunConfig& cfg) {
    OutputStage stage(cfg.out, "preference-correlations", cfg.seed, cfg.alpha,
                      fnv1a64_hex(run_config_to_json(cfg)));
    ProfileSet set = load_corpus_checked(cfg);
    stage.add_input("corpus", cfg.corpus);
    TraitWordLists pers = load_lists_checked(cfg.personality_lists, "personality");
    TraitWordLists pref = load_lists_checked(cfg.preference_lists, "preference");
    add_list_inputs(stage, "personality_lists/", cfg.personality_lists);
    add_list_inputs(stage, "preference_lists/", cfg.preference_lists);

    TokenConfig tok = make_token_config(cfg);
    const std::vector<std::string> favorites{kFavoritesSection};

    FeatureMatrix m = assemble_matrix(set, {per_sentence_op(personality_sections(), pers, tok, "pers_"),
                                            per_sentence_op(favorites, pref, tok, "pref_")});
    auto results = correlate_matrix(m, matched_pair_family(), cfg.alpha);

    stage.add("features.csv", matrix_to_csv(m));
    stage.add("preference_correlations.csv", report_to_csv(results));
    stage.add("preference_correlations.md", render_matched_pairs_markdown(results));
    stage.commit();
}

void run_topic_correlations(const RunConfig& cfg) {
    OutputStage stage(cfg.out, "topic-correlations", cfg.seed, cfg.alpha,
                      fnv1a64_hex(run_config_to_json(cfg)));
    ProfileSet set = load_corpus_checked(cfg);
    stage.add_input("corpus", cfg.corpus);
    TraitWordLists pers = load_lists_checked(cfg.personality_lists, "personality");
    add_list_inputs(stage, "lists/", cfg.personality_lists);

    TokenConfig tok = make_token_config(cfg);
    const std::vector<std::string> favorites{kFavoritesSection};

    Vocabulary vocab = build_vocabulary(set, favorites, tok);
    std::vector<Bow> docs;
    for (const auto& p : set.profiles) {
        Bow bow = to_bow(p, favorites, vocab, tok);
        if (!bow.empty()) docs.push_back(std::move(bow));
    }
    if (docs.empty()) throw DataError("no profiles with favorites text");
    LdaConfig lda_cfg = cfg.global_lda;
    lda_cfg.seed = cfg.seed;
    TopicModel model = fit_gibbs(docs, vocab, lda_cfg);

    FeatureMatrix m = assemble_matrix(set, {per_sentence_op(personality_sections(), pers, tok, "pers_"),
                                            topics_op(model, cfg.top_m, tok)});
    auto results = correlate_matrix(m, topic_trait_family(lda_cfg.topics), cfg.alpha);

    Lexicon no_exclusion;
    std::vector<WordList> topic_words;
    topic_words.reserve(lda_cfg.topics);
    for (int k = 0; k < lda_cfg.topics; ++k) {
        topic_words.push_back(top_words(model, k, 10, no_exclusion));
    }

    stage.add("model.json", model_to_json(model));
    stage.add("features.csv", matrix_to_csv(m));
    stage.add("topic_correlations.csv", report_to_csv(results));
    stage.add("table4.md", render_topic_report_markdown(results, topic_words));
    stage.commit();
}

std::string run_report(const fs::path& report_csv) {
    auto results = load_report_csv(report_csv);
    bool matched = !results.empty();
    for (const auto& r : results) {
        if (r.feature_a.rfind("pers_", 0) != 0 || r.feature_b.rfind("pref_", 0) != 0) {
            matched = false;
            break;
        }
    }
    return matched ? render_matched_pairs_markdown(results) : render_report_markdown(results);
}

// ---------------------------------------------------------------------------
// Feature-pair families
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> cue_feature_family() {
    std::vector<std::string> names;
    for (const char* n : kCueFeatureNames) names.emplace_back(n);
    for (const char* n : kRatioFeatureNames) names.emplace_back(n);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            pairs.emplace_back(names[i], names[j]);
        }
    }
    return pairs;
}

std::vector<std::pair<std::string, std::string>> matched_pair_family() {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (char c : kTraitCodes) {
        pairs.emplace_back(std::string("pers_") + c, std::string("pref_") + c);
    }
    return pairs;
}

std::vector<std::pair<std::string, std::string>> topic_trait_family(int topics) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int k = 0; k < topics; ++k) {
        for (char c : kTraitCodes) {
            pairs.emplace_back("topic_" + std::to_string(k), std::string("pers_") + c);
        }
    }
    return pairs;
}

} // namespace traittopics
