#include "traittopics/lda.hpp"

#include "traittopics/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace traittopics {

using json = nlohmann::json;

void LdaConfig::validate() const {
    if (topics < 1) throw DataError("lda config: topics must be >= 1");
    if (!(alpha > 0.0)) throw DataError("lda config: alpha must be > 0");
    if (!(beta > 0.0)) throw DataError("lda config: beta must be > 0");
    if (burn_in < 0) throw DataError("lda config: burn_in must be >= 0");
    if (iterations <= burn_in) throw DataError("lda config: iterations must exceed burn_in");
    if (sample_every < 1) throw DataError("lda config: sample_every must be >= 1");
}

namespace {

// 53-bit uniform in [0,1). Derived from raw mt19937_64 output so the
// double stream does not depend on library distribution internals.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

constexpr int kTraceEvery = 10;

// Log-likelihood under instantaneous count-based estimates; used for the
// per-sweep diagnostic trace. n_wk is word-major (V x K).
double trace_ll(const std::vector<Bow>& docs, const Grid<std::int32_t>& n_wk,
                const Grid<std::int32_t>& n_dk, const std::vector<std::int32_t>& n_k,
                const std::vector<std::int32_t>& n_d, const LdaConfig& cfg, int V) {
    const int K = cfg.topics;
    double ll = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const double denom_d = n_d[d] + K * cfg.alpha;
        for (const auto& [w, c] : docs[d]) {
            const std::int32_t* wk = n_wk.row(w);
            double mix = 0.0;
            for (int k = 0; k < K; ++k) {
                double phi_kw = (wk[k] + cfg.beta) / (n_k[k] + V * cfg.beta);
                double theta_dk = (n_dk.at(d, k) + cfg.alpha) / denom_d;
                mix += theta_dk * phi_kw;
            }
            ll += c * std::log(mix);
        }
    }
    return ll;
}

} // namespace

TopicModel fit_gibbs(const std::vector<Bow>& docs, const Vocabulary& vocab,
                     const LdaConfig& cfg) {
    cfg.validate();
    if (docs.empty()) throw DataError("fit_gibbs: no documents");
    if (vocab.size() == 0) throw DataError("fit_gibbs: empty vocabulary");

    const int K = cfg.topics;
    const int V = vocab.size();
    const std::size_t D = docs.size();

    // Expand bows into token streams; order is (ascending word id, repeats
    // adjacent), which fixes the sampling order and hence the chain.
    std::vector<std::vector<std::int32_t>> tokens(D);
    for (std::size_t d = 0; d < D; ++d) {
        std::int64_t len = 0;
        for (const auto& [w, c] : docs[d]) {
            if (w < 0 || w >= V) {
                throw DataError("fit_gibbs: document " + std::to_string(d) +
                                " has word id outside vocabulary");
            }
            if (c <= 0) {
                throw DataError("fit_gibbs: document " + std::to_string(d) +
                                " has nonpositive count");
            }
            len += c;
        }
        if (len == 0) {
            throw DataError("fit_gibbs: document " + std::to_string(d) + " is empty");
        }
        tokens[d].reserve(static_cast<std::size_t>(len));
        for (const auto& [w, c] : docs[d]) {
            for (std::int32_t i = 0; i < c; ++i) tokens[d].push_back(w);
        }
    }

    TopicModel model;
    model.config = cfg;
    model.vocab = vocab;
    model.count_doc_topic = Grid<std::int32_t>(D, K, 0);
    model.count_topic.assign(K, 0);
    model.count_doc.assign(D, 0);
    model.assignments.resize(D);

    // word-major working table keeps the resampling loop on one cache line
    Grid<std::int32_t> n_wk(V, K, 0);
    auto& n_dk = model.count_doc_topic;
    auto& n_k = model.count_topic;
    auto& n_d = model.count_doc;

    std::mt19937_64 rng(cfg.seed);

    for (std::size_t d = 0; d < D; ++d) {
        model.assignments[d].resize(tokens[d].size());
        for (std::size_t i = 0; i < tokens[d].size(); ++i) {
            int k = static_cast<int>(uniform01(rng) * K);
            if (k == K) k = K - 1;
            model.assignments[d][i] = k;
            ++n_wk.at(tokens[d][i], k);
            ++n_dk.at(d, k);
            ++n_k[k];
            ++n_d[d];
        }
    }

    Grid<double> phi_acc(K, V, 0.0);
    Grid<double> theta_acc(D, K, 0.0);
    int samples = 0;
    const double v_beta = V * cfg.beta;

    // reciprocal of the topic-total denominator, maintained incrementally:
    // two divisions per token instead of K
    std::vector<double> inv_nk(K);
    for (int k = 0; k < K; ++k) inv_nk[k] = 1.0 / (n_k[k] + v_beta);

    std::vector<double> p(K);
    for (int sweep = 1; sweep <= cfg.iterations; ++sweep) {
        for (std::size_t d = 0; d < D; ++d) {
            auto& z = model.assignments[d];
            const auto& toks = tokens[d];
            std::int32_t* dk = n_dk.row(d);
            for (std::size_t i = 0; i < toks.size(); ++i) {
                const std::int32_t w = toks[i];
                const int old_k = z[i];
                std::int32_t* wk = n_wk.row(w);
                --dk[old_k];
                --wk[old_k];
                --n_k[old_k];
                inv_nk[old_k] = 1.0 / (n_k[old_k] + v_beta);

                double total = 0.0;
                for (int k = 0; k < K; ++k) {
                    total += (dk[k] + cfg.alpha) * (wk[k] + cfg.beta) * inv_nk[k];
                    p[k] = total;
                }
                const double u = uniform01(rng) * total;
                int new_k = 0;
                while (new_k < K - 1 && u >= p[new_k]) ++new_k;

                z[i] = new_k;
                ++dk[new_k];
                ++wk[new_k];
                ++n_k[new_k];
                inv_nk[new_k] = 1.0 / (n_k[new_k] + v_beta);
            }
        }

        if (sweep % kTraceEvery == 0 || sweep == cfg.iterations) {
            model.ll_trace.push_back(trace_ll(docs, n_wk, n_dk, n_k, n_d, cfg, V));
        }

        bool take_sample = sweep > cfg.burn_in && (sweep - cfg.burn_in) % cfg.sample_every == 0;
        if (sweep == cfg.iterations && samples == 0) take_sample = true;
        if (take_sample) {
            for (int k = 0; k < K; ++k) {
                const double denom = n_k[k] + v_beta;
                double* dst = phi_acc.row(k);
                for (int w = 0; w < V; ++w) dst[w] += (n_wk.at(w, k) + cfg.beta) / denom;
            }
            for (std::size_t d = 0; d < D; ++d) {
                const double denom = n_d[d] + K * cfg.alpha;
                double* dst = theta_acc.row(d);
                const std::int32_t* src = n_dk.row(d);
                for (int k = 0; k < K; ++k) dst[k] += (src[k] + cfg.alpha) / denom;
            }
            ++samples;
        }
    }

    model.phi = Grid<double>(K, V, 0.0);
    model.theta = Grid<double>(D, K, 0.0);
    for (std::size_t i = 0; i < phi_acc.data.size(); ++i) {
        model.phi.data[i] = phi_acc.data[i] / samples;
    }
    for (std::size_t i = 0; i < theta_acc.data.size(); ++i) {
        model.theta.data[i] = theta_acc.data[i] / samples;
    }
    model.count_topic_word = Grid<std::int32_t>(K, V, 0);
    for (int w = 0; w < V; ++w) {
        for (int k = 0; k < K; ++k) model.count_topic_word.at(k, w) = n_wk.at(w, k);
    }
    return model;
}

double log_likelihood(const TopicModel& model, const std::vector<Bow>& docs) {
    const int K = model.config.topics;
    const int V = model.vocab.size();
    if (docs.size() != model.theta.rows) {
        throw DataError("log_likelihood: document count does not match model");
    }
    double ll = 0.0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const double* theta_d = model.theta.row(d);
        for (const auto& [w, c] : docs[d]) {
            if (w < 0 || w >= V) {
                throw DataError("log_likelihood: token outside vocabulary in document " +
                                std::to_string(d));
            }
            double mix = 0.0;
            for (int k = 0; k < K; ++k) mix += theta_d[k] * model.phi.at(k, w);
            ll += c * std::log(mix);
        }
    }
    return ll;
}

WordList top_words(const TopicModel& model, int topic, int k, const Lexicon& exclude) {
    if (topic < 0 || topic >= model.config.topics) {
        throw DataError("top_words: topic index out of range");
    }
    if (k < 1) throw DataError("top_words: k must be >= 1");
    WordList entries;
    entries.reserve(model.vocab.words.size());
    for (int w = 0; w < model.vocab.size(); ++w) {
        const std::string& word = model.vocab.words[w];
        if (exclude.contains(word)) continue;
        entries.push_back({word, model.phi.at(topic, w)});
    }
    std::sort(entries.begin(), entries.end(), [](const WordEntry& a, const WordEntry& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.word < b.word;
    });
    if (static_cast<int>(entries.size()) > k) entries.resize(k);
    return entries;
}

std::vector<double> topic_shares(const TopicModel& model) {
    const int K = model.config.topics;
    std::vector<double> share(K, 0.0);
    double total_tokens = 0.0;
    for (std::size_t d = 0; d < model.theta.rows; ++d) total_tokens += model.count_doc[d];
    if (total_tokens == 0.0) throw DataError("topic_shares: model has no sampler state");
    for (std::size_t d = 0; d < model.theta.rows; ++d) {
        const double w = model.count_doc[d] / total_tokens;
        const double* theta_d = model.theta.row(d);
        for (int k = 0; k < K; ++k) share[k] += w * theta_d[k];
    }
    return share;
}

std::string model_to_json(const TopicModel& model) {
    json j;
    j["config"] = {{"topics", model.config.topics},   {"alpha", model.config.alpha},
                   {"beta", model.config.beta},       {"iterations", model.config.iterations},
                   {"burn_in", model.config.burn_in}, {"sample_every", model.config.sample_every},
                   {"seed", model.config.seed}};
    j["vocabulary"] = {{"words", model.vocab.words}, {"doc_freq", model.vocab.doc_freq}};
    auto rows_of = [](const Grid<double>& g) {
        std::vector<std::vector<double>> rows(g.rows);
        for (std::size_t r = 0; r < g.rows; ++r) {
            rows[r].assign(g.row(r), g.row(r) + g.cols);
        }
        return rows;
    };
    j["phi"] = rows_of(model.phi);
    j["theta"] = rows_of(model.theta);
    return j.dump();
}

TopicModel model_from_json(const std::string& text) {
    json j = json::parse(text);
    TopicModel model;
    const auto& jc = j.at("config");
    model.config.topics = jc.at("topics").get<int>();
    model.config.alpha = jc.at("alpha").get<double>();
    model.config.beta = jc.at("beta").get<double>();
    model.config.iterations = jc.at("iterations").get<int>();
    model.config.burn_in = jc.at("burn_in").get<int>();
    model.config.sample_every = jc.at("sample_every").get<int>();
    model.config.seed = jc.at("seed").get<std::uint64_t>();
    model.vocab = vocabulary_from_json(j.at("vocabulary").dump());

    auto grid_of = [](const json& rows) {
        Grid<double> g;
        g.rows = rows.size();
        g.cols = g.rows == 0 ? 0 : rows[0].size();
        g.data.reserve(g.rows * g.cols);
        for (const auto& row : rows) {
            if (row.size() != g.cols) throw DataError("model JSON: ragged matrix");
            for (const auto& v : row) g.data.push_back(v.get<double>());
        }
        return g;
    };
    model.phi = grid_of(j.at("phi"));
    model.theta = grid_of(j.at("theta"));
    if (model.phi.rows != static_cast<std::size_t>(model.config.topics) ||
        model.phi.cols != model.vocab.words.size()) {
        throw DataError("model JSON: phi shape does not match config/vocabulary");
    }
    return model;
}

void save_model(const TopicModel& model, const std::filesystem::path& path) {
    write_file(path, model_to_json(model));
}

TopicModel load_model(const std::filesystem::path& path) {
    return model_from_json(read_file(path));
}

} // namespace traittopics
