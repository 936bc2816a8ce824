// traittopics command line: synthetic corpus generation, trait word lists,
// and the three correlation experiments, all seeded and file-driven.

#include "traittopics/pipeline.hpp"

#include "traittopics/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace tt = traittopics;

namespace {

struct CommonArgs {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> alpha;
    std::optional<std::string> corpus;
    std::optional<std::string> lexicons;
    std::optional<std::string> lists;
    std::optional<std::string> pref_lists;
    std::optional<int> top_k;
    std::optional<int> top_m;
    std::optional<std::string> sections;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON config file");
    cmd->add_option("--seed", args.seed, "RNG seed");
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--alpha", args.alpha, "FDR level");
    cmd->add_option("--corpus", args.corpus, "corpus JSONL file");
    cmd->add_option("--lexicons", args.lexicons, "lexicon directory");
}

// precedence: CLI > config file > defaults
tt::RunConfig resolve(const CommonArgs& args) {
    tt::RunConfig cfg;
    if (args.config) cfg = tt::load_run_config(*args.config);
    if (args.seed) cfg.seed = *args.seed;
    if (args.out) cfg.out = *args.out;
    if (args.alpha) cfg.alpha = *args.alpha;
    if (args.corpus) cfg.corpus = *args.corpus;
    if (args.lexicons) cfg.lexicon_dir = *args.lexicons;
    if (args.lists) cfg.personality_lists = *args.lists;
    if (args.pref_lists) cfg.preference_lists = *args.pref_lists;
    if (args.top_k) cfg.top_k = *args.top_k;
    if (args.top_m) cfg.top_m = *args.top_m;
    if (args.sections) {
        cfg.trait_sections = *args.sections == "favorites"
                                 ? std::vector<std::string>{tt::kFavoritesSection}
                                 : tt::personality_sections();
    }
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"personality/preference text analytics pipeline"};
    app.require_subcommand(1);

    CommonArgs synth_args, traits_args, cue_args, pref_args, topic_args;
    std::string synth_spec_path;
    std::optional<int> synth_docs;
    std::string report_in;
    std::optional<std::string> report_out;

    auto* synth = app.add_subcommand("synth", "generate a synthetic labeled corpus");
    synth->add_option("--spec", synth_spec_path, "synthesis spec JSON");
    synth->add_option("--docs", synth_docs, "number of profiles");
    add_common_flags(synth, synth_args);

    auto* traits = app.add_subcommand("traits", "emit the eight trait word lists");
    add_common_flags(traits, traits_args);
    traits->add_option("--sections", traits_args.sections,
                       "'profile' (default) or 'favorites'");
    traits->add_option("--top-k", traits_args.top_k, "words per list");

    auto* cue = app.add_subcommand("cue-correlations",
                                   "linguistic cues vs dichotomy ratios report");
    add_common_flags(cue, cue_args);
    cue->add_option("--lists", cue_args.lists, "trait word list directory");

    auto* pref = app.add_subcommand("preference-correlations",
                                    "matched personality-preference pairs report");
    add_common_flags(pref, pref_args);
    pref->add_option("--lists", pref_args.lists, "personality word list directory");
    pref->add_option("--pref-lists", pref_args.pref_lists, "preference word list directory");

    auto* topic = app.add_subcommand("topic-correlations",
                                     "global preference topics vs traits report");
    add_common_flags(topic, topic_args);
    topic->add_option("--lists", topic_args.lists, "personality word list directory");
    topic->add_option("--top-m", topic_args.top_m, "top words per topic feature");

    auto* report = app.add_subcommand("report", "re-render a correlation CSV as markdown");
    report->add_option("--in", report_in, "correlation report CSV")->required();
    report->add_option("--out", report_out, "markdown output file (default stdout)");

    try {
        app.parse(argc, argv);

        if (synth->parsed()) {
            tt::SynthSpec spec;
            if (!synth_spec_path.empty()) {
                spec = tt::synth_spec_from_json(tt::read_file(synth_spec_path));
            }
            if (synth_args.seed) spec.seed = *synth_args.seed;
            if (synth_docs) spec.docs = *synth_docs;
            std::filesystem::path out = synth_args.out ? *synth_args.out : "out";
            tt::run_synth(spec, out);
        } else if (traits->parsed()) {
            tt::run_traits(resolve(traits_args));
        } else if (cue->parsed()) {
            tt::run_cue_correlations(resolve(cue_args));
        } else if (pref->parsed()) {
            tt::run_preference_correlations(resolve(pref_args));
        } else if (topic->parsed()) {
            tt::run_topic_correlations(resolve(topic_args));
        } else if (report->parsed()) {
            std::string md = tt::run_report(report_in);
            if (report_out) {
                tt::write_file(*report_out, md);
            } else {
                std::cout << md;
            }
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const tt::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
}
