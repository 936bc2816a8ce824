#include "traittopics/synth.hpp"

#include "traittopics/errors.hpp"
#include "traittopics/trait_model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace traittopics {

using json = nlohmann::json;

void SynthSpec::validate() const {
    if (vocab_size < 1) throw DataError("synth spec: vocab_size must be >= 1");
    if (topics < 1) throw DataError("synth spec: topics must be >= 1");
    if (docs < 1) throw DataError("synth spec: docs must be >= 1");
    if (tokens_per_doc < 1) throw DataError("synth spec: tokens_per_doc must be >= 1");
    if (!(theta_alpha > 0.0)) throw DataError("synth spec: theta_alpha must be > 0");
    if (!(phi_concentration > 0.0)) throw DataError("synth spec: phi_concentration must be > 0");
    if (injection < 1.0) throw DataError("synth spec: injection multiplier must be >= 1");
    if (planted_per_trait < 0) throw DataError("synth spec: planted_per_trait must be >= 0");
    if (base_vocab_size < 1) throw DataError("synth spec: base_vocab_size must be >= 1");
    if (sentence_len < 1) throw DataError("synth spec: sentence_len must be >= 1");
    if (label_leak_rate < 0.0 || label_leak_rate > 1.0) {
        throw DataError("synth spec: label_leak_rate outside [0,1]");
    }
    if (!true_phi.empty()) {
        if (static_cast<int>(true_phi.size()) != topics) {
            throw DataError("synth spec: true_phi row count does not match topics");
        }
        for (const auto& row : true_phi) {
            if (static_cast<int>(row.size()) != vocab_size) {
                throw DataError("synth spec: true_phi row length does not match vocab_size");
            }
            double sum = std::accumulate(row.begin(), row.end(), 0.0);
            if (std::fabs(sum - 1.0) > 1e-6) {
                throw DataError("synth spec: true_phi rows must sum to 1");
            }
        }
    }
    for (const auto& t : targets) {
        axis_of_trait(t.trait);  // validates the code
        if (t.topic < 0 || t.topic >= topics) {
            throw DataError("synth spec: correlation target topic out of range");
        }
        if (t.strength < 0.0 || t.strength > 1.0) {
            throw DataError("synth spec: correlation strength outside [0,1]");
        }
    }
    for (const auto& [trait, words] : trait_vocab) {
        axis_of_trait(trait);
        if (words.empty()) throw DataError("synth spec: empty planted word set");
    }
}

// ---------------------------------------------------------------------------
// Deterministic samplers (fixed algorithms, independent of library internals)
// ---------------------------------------------------------------------------

namespace {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal01(std::mt19937_64& rng) {
    // Box-Muller; consumes exactly two uniforms
    double u1 = uniform01(rng);
    while (u1 == 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Marsaglia-Tsang; shape < 1 handled by the boost relation.
double gamma_sample(std::mt19937_64& rng, double shape) {
    if (shape < 1.0) {
        double u = uniform01(rng);
        while (u == 0.0) u = uniform01(rng);
        return gamma_sample(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal01(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

std::vector<double> dirichlet(std::mt19937_64& rng, int dim, double alpha) {
    std::vector<double> out(dim);
    double sum = 0.0;
    for (int i = 0; i < dim; ++i) {
        out[i] = gamma_sample(rng, alpha);
        sum += out[i];
    }
    if (sum == 0.0) {  // pathological underflow: fall back to uniform
        std::fill(out.begin(), out.end(), 1.0 / dim);
        return out;
    }
    for (double& v : out) v /= sum;
    return out;
}

int sample_cumulative(const std::vector<double>& cum, double u) {
    const double target = u * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    if (it == cum.end()) return static_cast<int>(cum.size()) - 1;
    return static_cast<int>(it - cum.begin());
}

std::string padded_name(const std::string& prefix, int i, int width) {
    std::string num = std::to_string(i);
    if (static_cast<int>(num.size()) < width) {
        num.insert(0, width - num.size(), '0');
    }
    return prefix + num;
}

int digits_for(int n) {
    int width = 1;
    for (int v = n - 1; v >= 10; v /= 10) ++width;
    return width < 3 ? 3 : width;
}

Grid<double> sample_true_phi(const SynthSpec& spec, std::mt19937_64& rng) {
    Grid<double> phi(spec.topics, spec.vocab_size, 0.0);
    if (!spec.true_phi.empty()) {
        for (int k = 0; k < spec.topics; ++k) {
            for (int w = 0; w < spec.vocab_size; ++w) phi.at(k, w) = spec.true_phi[k][w];
        }
        return phi;
    }
    for (int k = 0; k < spec.topics; ++k) {
        auto row = dirichlet(rng, spec.vocab_size, spec.phi_concentration);
        for (int w = 0; w < spec.vocab_size; ++w) phi.at(k, w) = row[w];
    }
    return phi;
}

std::vector<std::string> favorites_words(const SynthSpec& spec) {
    std::vector<std::string> words;
    words.reserve(spec.vocab_size);
    const int width = digits_for(spec.vocab_size);
    for (int w = 0; w < spec.vocab_size; ++w) words.push_back(padded_name("v", w, width));
    return words;
}

} // namespace

std::vector<std::string> all_mbti_types() {
    std::vector<std::string> types;
    for (char a : {'E', 'I'})
        for (char b : {'S', 'N'})
            for (char c : {'T', 'F'})
                for (char d : {'J', 'P'}) types.push_back({a, b, c, d});
    return types;
}

// ---------------------------------------------------------------------------
// Plain LDA corpus
// ---------------------------------------------------------------------------

LdaCorpus generate_lda_corpus(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);

    LdaCorpus corpus;
    corpus.true_phi = sample_true_phi(spec, rng);
    corpus.true_theta = Grid<double>(spec.docs, spec.topics, 0.0);

    std::vector<std::vector<double>> phi_cum(spec.topics, std::vector<double>(spec.vocab_size));
    for (int k = 0; k < spec.topics; ++k) {
        double run = 0.0;
        for (int w = 0; w < spec.vocab_size; ++w) {
            run += corpus.true_phi.at(k, w);
            phi_cum[k][w] = run;
        }
    }

    std::vector<int> doc_freq(spec.vocab_size, 0);
    corpus.docs.reserve(spec.docs);
    std::vector<int> counts(spec.vocab_size);
    std::vector<double> theta_cum(spec.topics);
    for (int d = 0; d < spec.docs; ++d) {
        auto theta = dirichlet(rng, spec.topics, spec.theta_alpha);
        for (int k = 0; k < spec.topics; ++k) corpus.true_theta.at(d, k) = theta[k];
        double run = 0.0;
        for (int k = 0; k < spec.topics; ++k) {
            run += theta[k];
            theta_cum[k] = run;
        }
        std::fill(counts.begin(), counts.end(), 0);
        for (int t = 0; t < spec.tokens_per_doc; ++t) {
            const int k = sample_cumulative(theta_cum, uniform01(rng));
            const int w = sample_cumulative(phi_cum[k], uniform01(rng));
            ++counts[w];
        }
        Bow bow;
        for (int w = 0; w < spec.vocab_size; ++w) {
            if (counts[w] > 0) {
                bow.emplace_back(w, counts[w]);
                ++doc_freq[w];
            }
        }
        corpus.docs.push_back(std::move(bow));
    }

    corpus.vocab.words = favorites_words(spec);
    corpus.vocab.doc_freq = doc_freq;
    for (int w = 0; w < spec.vocab_size; ++w) {
        corpus.vocab.index.emplace(corpus.vocab.words[w], w);
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// Labeled profile corpus
// ---------------------------------------------------------------------------

namespace {

// Common function and affect words mixed into every personality section at
// base rate. They give the linguistic-cue features genuine variance on
// synthetic corpora (rates would otherwise be constant zero), while staying
// independent of the labels.
constexpr std::array<const char*, 22> kFunctionWords = {
    "i",   "me",  "my",    "we",   "us",    "and",  "both", "but",
    "or",  "without", "he", "she", "not",   "never", "no",  "love",
    "happy", "great", "hate", "sad", "bad", "don't"};

std::map<char, std::vector<std::string>> default_trait_vocab(const SynthSpec& spec) {
    std::map<char, std::vector<std::string>> out;
    for (char trait : kTraitCodes) {
        std::vector<std::string> words;
        for (int i = 0; i < spec.planted_per_trait; ++i) {
            std::string t(1, static_cast<char>(std::tolower(trait)));
            words.push_back(padded_name(t + "word", i, 2));
        }
        out[trait] = std::move(words);
    }
    return out;
}

// Sentences of roughly sentence_len tokens (jittered so per-document average
// sentence length varies), '.' terminated. The draw callback produces one
// token per call.
template <typename Draw>
std::string render_text(int n_tokens, int sentence_len, Draw&& draw,
                        std::mt19937_64& rng, double leak_rate, const std::string& leak_token) {
    std::string text;
    int in_sentence = 0;
    auto next_len = [&]() {
        if (sentence_len <= 2) return sentence_len;
        const int jitter = sentence_len / 2;
        return sentence_len - jitter + static_cast<int>(rng() % (2 * jitter + 1));
    };
    int target = next_len();
    for (int t = 0; t < n_tokens; ++t) {
        if (in_sentence > 0) text += ' ';
        text += draw();
        ++in_sentence;
        if (in_sentence == target || t + 1 == n_tokens) {
            if (leak_rate > 0.0 && uniform01(rng) < leak_rate) {
                text += ' ';
                text += leak_token;
            }
            text += ". ";
            in_sentence = 0;
            target = next_len();
        }
    }
    if (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

} // namespace

SynthProfiles generate_profiles(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);

    SynthProfiles out;
    out.truth.seed = spec.seed;
    out.truth.true_phi = sample_true_phi(spec, rng);
    out.truth.favorites_vocab = favorites_words(spec);
    out.truth.trait_vocab = spec.trait_vocab.empty() ? default_trait_vocab(spec) : spec.trait_vocab;
    out.truth.targets = spec.targets;

    // personality vocabulary: base words, cue-bearing function words, and
    // every trait's planted words
    std::vector<std::string> pers_words;
    const int width = digits_for(spec.base_vocab_size);
    for (int w = 0; w < spec.base_vocab_size; ++w) {
        pers_words.push_back(padded_name("base", w, width));
    }
    for (const char* w : kFunctionWords) pers_words.emplace_back(w);
    std::vector<std::pair<char, std::size_t>> planted_span;  // trait, first index
    for (char trait : kTraitCodes) {
        auto it = out.truth.trait_vocab.find(trait);
        if (it == out.truth.trait_vocab.end()) continue;
        planted_span.emplace_back(trait, pers_words.size());
        pers_words.insert(pers_words.end(), it->second.begin(), it->second.end());
    }

    // per-label cumulative weights over the personality vocabulary
    const auto types = all_mbti_types();
    std::vector<std::vector<double>> label_cum(types.size());
    for (std::size_t li = 0; li < types.size(); ++li) {
        std::vector<double> weights(pers_words.size(), 1.0);
        for (const auto& [trait, first] : planted_span) {
            if (!label_has_trait(types[li], trait)) continue;
            const auto& planted = out.truth.trait_vocab.at(trait);
            for (std::size_t i = 0; i < planted.size(); ++i) {
                weights[first + i] = spec.injection;
            }
        }
        label_cum[li].resize(weights.size());
        double run = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            run += weights[i];
            label_cum[li][i] = run;
        }
    }

    std::vector<std::vector<double>> phi_cum(spec.topics, std::vector<double>(spec.vocab_size));
    for (int k = 0; k < spec.topics; ++k) {
        double run = 0.0;
        for (int w = 0; w < spec.vocab_size; ++w) {
            run += out.truth.true_phi.at(k, w);
            phi_cum[k][w] = run;
        }
    }

    const int id_width = digits_for(spec.docs) < 4 ? 4 : digits_for(spec.docs);
    std::vector<double> theta_cum(spec.topics);
    for (int d = 0; d < spec.docs; ++d) {
        const std::size_t li = static_cast<std::size_t>(d) % types.size();
        const std::string& label = types[li];
        std::string label_token = lowercase_ascii(label);

        Profile p;
        p.id = padded_name("p", d, id_width);
        p.mbti_label = label;

        const auto& cum = label_cum[li];
        p.sections["self_summary"] = render_text(
            spec.tokens_per_doc, spec.sentence_len,
            [&]() { return pers_words[sample_cumulative(cum, uniform01(rng))]; }, rng,
            spec.label_leak_rate, label_token);

        auto theta = dirichlet(rng, spec.topics, spec.theta_alpha);
        for (const auto& target : spec.targets) {
            if (target.strength == 0.0) continue;
            if (!label_has_trait(label, target.trait)) continue;
            for (int k = 0; k < spec.topics; ++k) theta[k] *= (1.0 - target.strength);
            theta[target.topic] += target.strength;
        }
        double run = 0.0;
        for (int k = 0; k < spec.topics; ++k) {
            run += theta[k];
            theta_cum[k] = run;
        }
        p.sections["favorites"] = render_text(
            spec.tokens_per_doc, spec.sentence_len,
            [&]() {
                const int k = sample_cumulative(theta_cum, uniform01(rng));
                return out.truth.favorites_vocab[sample_cumulative(phi_cum[k], uniform01(rng))];
            },
            rng, 0.0, label_token);

        out.profiles.profiles.push_back(std::move(p));
    }
    out.profiles.provenance = "synthetic corpus, seed " + std::to_string(spec.seed);
    return out;
}

// ---------------------------------------------------------------------------
// Topic matching
// ---------------------------------------------------------------------------

namespace {

double cosine(const double* a, const double* b, std::size_t n) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

} // namespace

MatchResult match_topics(const Grid<double>& learned_phi, const Grid<double>& true_phi) {
    if (learned_phi.rows != true_phi.rows || learned_phi.cols != true_phi.cols) {
        throw DataError("match_topics: shape mismatch");
    }
    const std::size_t K = true_phi.rows;
    Grid<double> sim(K, K, 0.0);
    for (std::size_t t = 0; t < K; ++t) {
        for (std::size_t l = 0; l < K; ++l) {
            sim.at(t, l) = cosine(true_phi.row(t), learned_phi.row(l), true_phi.cols);
        }
    }
    MatchResult res;
    res.permutation.assign(K, -1);
    std::vector<bool> used_true(K, false), used_learned(K, false);
    double total = 0.0;
    for (std::size_t step = 0; step < K; ++step) {
        double best = -2.0;
        std::size_t bt = 0, bl = 0;
        for (std::size_t t = 0; t < K; ++t) {
            if (used_true[t]) continue;
            for (std::size_t l = 0; l < K; ++l) {
                if (used_learned[l]) continue;
                if (sim.at(t, l) > best) {
                    best = sim.at(t, l);
                    bt = t;
                    bl = l;
                }
            }
        }
        used_true[bt] = true;
        used_learned[bl] = true;
        res.permutation[bt] = static_cast<int>(bl);
        total += best;
    }
    res.mean_cosine = total / static_cast<double>(K);
    return res;
}

Grid<double> project_rows(const Grid<double>& rows, const std::vector<std::string>& words,
                          const Vocabulary& target) {
    if (rows.cols != words.size()) throw DataError("project_rows: word list length mismatch");
    Grid<double> out(rows.rows, target.words.size(), 0.0);
    for (std::size_t w = 0; w < words.size(); ++w) {
        const int id = target.id_of(words[w]);
        if (id < 0) continue;
        for (std::size_t r = 0; r < rows.rows; ++r) out.at(r, id) = rows.at(r, w);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

SynthSpec synth_spec_from_json(const std::string& text) {
    json j = json::parse(text);
    SynthSpec spec;
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("vocab_size")) spec.vocab_size = j["vocab_size"].get<int>();
    if (j.contains("topics")) spec.topics = j["topics"].get<int>();
    if (j.contains("docs")) spec.docs = j["docs"].get<int>();
    if (j.contains("tokens_per_doc")) spec.tokens_per_doc = j["tokens_per_doc"].get<int>();
    if (j.contains("theta_alpha")) spec.theta_alpha = j["theta_alpha"].get<double>();
    if (j.contains("phi_concentration")) {
        spec.phi_concentration = j["phi_concentration"].get<double>();
    }
    if (j.contains("true_phi")) {
        spec.true_phi = j["true_phi"].get<std::vector<std::vector<double>>>();
    }
    if (j.contains("planted_per_trait")) spec.planted_per_trait = j["planted_per_trait"].get<int>();
    if (j.contains("injection")) spec.injection = j["injection"].get<double>();
    if (j.contains("base_vocab_size")) spec.base_vocab_size = j["base_vocab_size"].get<int>();
    if (j.contains("sentence_len")) spec.sentence_len = j["sentence_len"].get<int>();
    if (j.contains("label_leak_rate")) spec.label_leak_rate = j["label_leak_rate"].get<double>();
    if (j.contains("trait_vocab")) {
        for (auto it = j["trait_vocab"].begin(); it != j["trait_vocab"].end(); ++it) {
            if (it.key().size() != 1) throw DataError("synth spec: bad trait key " + it.key());
            spec.trait_vocab[it.key()[0]] = it.value().get<std::vector<std::string>>();
        }
    }
    if (j.contains("targets")) {
        for (const auto& jt : j["targets"]) {
            CorrelationTarget t;
            std::string code = jt.at("trait").get<std::string>();
            if (code.size() != 1) throw DataError("synth spec: bad target trait " + code);
            t.trait = code[0];
            t.topic = jt.at("topic").get<int>();
            t.strength = jt.at("strength").get<double>();
            spec.targets.push_back(t);
        }
    }
    spec.validate();
    return spec;
}

std::string synth_spec_to_json(const SynthSpec& spec) {
    json j;
    j["seed"] = spec.seed;
    j["vocab_size"] = spec.vocab_size;
    j["topics"] = spec.topics;
    j["docs"] = spec.docs;
    j["tokens_per_doc"] = spec.tokens_per_doc;
    j["theta_alpha"] = spec.theta_alpha;
    j["phi_concentration"] = spec.phi_concentration;
    if (!spec.true_phi.empty()) j["true_phi"] = spec.true_phi;
    j["planted_per_trait"] = spec.planted_per_trait;
    j["injection"] = spec.injection;
    j["base_vocab_size"] = spec.base_vocab_size;
    j["sentence_len"] = spec.sentence_len;
    j["label_leak_rate"] = spec.label_leak_rate;
    if (!spec.trait_vocab.empty()) {
        json tv = json::object();
        for (const auto& [trait, words] : spec.trait_vocab) tv[std::string(1, trait)] = words;
        j["trait_vocab"] = tv;
    }
    if (!spec.targets.empty()) {
        json targets = json::array();
        for (const auto& t : spec.targets) {
            targets.push_back({{"trait", std::string(1, t.trait)},
                               {"topic", t.topic},
                               {"strength", t.strength}});
        }
        j["targets"] = targets;
    }
    return j.dump(2);
}

std::string ground_truth_to_json(const GroundTruth& truth) {
    json j;
    j["seed"] = truth.seed;
    std::vector<std::vector<double>> phi(truth.true_phi.rows);
    for (std::size_t r = 0; r < truth.true_phi.rows; ++r) {
        phi[r].assign(truth.true_phi.row(r), truth.true_phi.row(r) + truth.true_phi.cols);
    }
    j["true_phi"] = phi;
    j["favorites_vocab"] = truth.favorites_vocab;
    json tv = json::object();
    for (const auto& [trait, words] : truth.trait_vocab) tv[std::string(1, trait)] = words;
    j["trait_vocab"] = tv;
    json targets = json::array();
    for (const auto& t : truth.targets) {
        targets.push_back(
            {{"trait", std::string(1, t.trait)}, {"topic", t.topic}, {"strength", t.strength}});
    }
    j["targets"] = targets;
    return j.dump();
}

GroundTruth ground_truth_from_json(const std::string& text) {
    json j = json::parse(text);
    GroundTruth truth;
    truth.seed = j.at("seed").get<std::uint64_t>();
    auto phi = j.at("true_phi").get<std::vector<std::vector<double>>>();
    truth.true_phi = Grid<double>(phi.size(), phi.empty() ? 0 : phi[0].size(), 0.0);
    for (std::size_t r = 0; r < phi.size(); ++r) {
        for (std::size_t c = 0; c < phi[r].size(); ++c) truth.true_phi.at(r, c) = phi[r][c];
    }
    truth.favorites_vocab = j.at("favorites_vocab").get<std::vector<std::string>>();
    for (auto it = j.at("trait_vocab").begin(); it != j.at("trait_vocab").end(); ++it) {
        truth.trait_vocab[it.key()[0]] = it.value().get<std::vector<std::string>>();
    }
    for (const auto& jt : j.at("targets")) {
        CorrelationTarget t;
        t.trait = jt.at("trait").get<std::string>()[0];
        t.topic = jt.at("topic").get<int>();
        t.strength = jt.at("strength").get<double>();
        truth.targets.push_back(t);
    }
    return truth;
}

} // namespace traittopics
