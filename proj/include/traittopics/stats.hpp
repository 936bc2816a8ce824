#ifndef TRAITTOPICS_STATS_HPP
#define TRAITTOPICS_STATS_HPP

#include "traittopics/features.hpp"

#include <span>
#include <string>
#include <vector>

// Pearson correlation with two-sided t-test p-values and Benjamini-Hochberg
// false-discovery-rate control. The t CDF is evaluated through the
// regularized incomplete beta function (continued fractions); no statistics
// library is involved.

namespace traittopics {

// Product-moment coefficient. Requires n >= 3 and nonconstant inputs.
double pearson(std::span<const double> x, std::span<const double> y);

// Two-sided p-value for r at sample size n via
//   t = r sqrt((n-2) / (1 - r^2)),  p = P(|T_{n-2}| >= |t|).
// |r| = 1 gives p = 0 by convention.
double p_value(double r, int n);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// Exposed for test oracles.
double incomplete_beta(double a, double b, double x);

struct BhResult {
    std::vector<bool> reject;   // input order
    std::vector<double> q;      // input order, monotone-enforced
};

// Benjamini-Hochberg step-up at level alpha. q-values are
// min_{j >= rank} p_(j) * m / j mapped back to input order.
BhResult bh_fdr(const std::vector<double>& pvals, double alpha);

struct CorrelationResult {
    std::string feature_a;
    std::string feature_b;
    int n = 0;            // pairwise-complete sample count
    double r = 0.0;
    double p = 1.0;
    double q = 1.0;
    bool significant = false;  // BH rejection at the configured level
    std::string stars;         // "", "*", "**", "***" for q < .05 / .01 / .001
};

// Pairwise-complete r and p per named pair, BH applied across exactly this
// family, results sorted by q ascending then by names.
std::vector<CorrelationResult> correlate_matrix(
    const FeatureMatrix& m, const std::vector<std::pair<std::string, std::string>>& pairs,
    double alpha);

std::string stars_for_q(double q);

// CSV with columns feature_a,feature_b,n,r,p,q,stars.
std::string report_to_csv(const std::vector<CorrelationResult>& results);
std::vector<CorrelationResult> report_from_csv(const std::string& text);
void save_report_csv(const std::vector<CorrelationResult>& results,
                     const std::filesystem::path& path);
std::vector<CorrelationResult> load_report_csv(const std::filesystem::path& path);

// | Feature 1 | Feature 2 | r | rows with stars appended to r.
std::string render_report_markdown(const std::vector<CorrelationResult>& results,
                                   bool significant_only = false);

// Matched-pair table: | Personality-Preference | r |.
std::string render_matched_pairs_markdown(const std::vector<CorrelationResult>& results);

// Topic summary: one row per topic with its top words and the traits it
// correlates with positively at the configured level.
std::string render_topic_report_markdown(const std::vector<CorrelationResult>& results,
                                         const std::vector<WordList>& topic_words);

} // namespace traittopics

#endif
