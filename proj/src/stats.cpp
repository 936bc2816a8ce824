#include "traittopics/stats.hpp"

#include "traittopics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace traittopics {

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw DataError("pearson: need at least 3 paired samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DataError("pearson: zero variance");
    const double r = sxy / std::sqrt(sxx * syy);
    // rounding can push a perfect correlation a ulp past +-1
    return std::clamp(r, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Incomplete beta / t-distribution
// ---------------------------------------------------------------------------

namespace {

// Continued fraction for the incomplete beta function, modified Lentz.
double beta_cf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-12;
    constexpr int kMaxIter = 500;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw DataError("incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * beta_cf(a, b, x) / a;
    }
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double p_value(double r, int n) {
    if (n < 3) throw DataError("p_value: need n >= 3");
    if (!(std::fabs(r) <= 1.0)) throw DataError("p_value: r outside [-1,1]");
    if (std::fabs(r) == 1.0) return 0.0;
    if (r == 0.0) return 1.0;
    const double nu = static_cast<double>(n - 2);
    const double t2 = r * r * nu / (1.0 - r * r);
    // P(|T_nu| >= |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2)
    return incomplete_beta(nu / 2.0, 0.5, nu / (nu + t2));
}

// ---------------------------------------------------------------------------
// Benjamini-Hochberg
// ---------------------------------------------------------------------------

BhResult bh_fdr(const std::vector<double>& pvals, double alpha) {
    if (pvals.empty()) throw DataError("bh_fdr: empty p-value list");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("bh_fdr: alpha outside (0,1)");
    const std::size_t m = pvals.size();
    for (double p : pvals) {
        if (!(p >= 0.0 && p <= 1.0)) throw DataError("bh_fdr: p-value outside [0,1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (pvals[a] != pvals[b]) return pvals[a] < pvals[b];
        return a < b;
    });

    // step-up: largest k with p_(k) <= k * alpha / m
    std::size_t k_star = 0;
    for (std::size_t k = m; k >= 1; --k) {
        if (pvals[order[k - 1]] <= static_cast<double>(k) * alpha / static_cast<double>(m)) {
            k_star = k;
            break;
        }
    }

    BhResult res;
    res.reject.assign(m, false);
    res.q.assign(m, 0.0);
    for (std::size_t i = 0; i < k_star; ++i) res.reject[order[i]] = true;

    double running = 1.0;
    for (std::size_t k = m; k >= 1; --k) {
        const double raw = pvals[order[k - 1]] * static_cast<double>(m) / static_cast<double>(k);
        running = std::min(running, raw);
        res.q[order[k - 1]] = running;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Matrix correlation
// ---------------------------------------------------------------------------

std::string stars_for_q(double q) {
    if (q < 0.001) return "***";
    if (q < 0.01) return "**";
    if (q < 0.05) return "*";
    return "";
}

std::vector<CorrelationResult> correlate_matrix(
    const FeatureMatrix& m, const std::vector<std::pair<std::string, std::string>>& pairs,
    double alpha) {
    std::vector<CorrelationResult> results;
    if (pairs.empty()) return results;

    std::vector<double> pvals;
    pvals.reserve(pairs.size());
    for (const auto& [name_a, name_b] : pairs) {
        auto col_a = m.column(name_a);
        auto col_b = m.column(name_b);
        std::vector<double> x, y;
        x.reserve(col_a.size());
        y.reserve(col_a.size());
        for (std::size_t i = 0; i < col_a.size(); ++i) {
            if (is_missing(col_a[i]) || is_missing(col_b[i])) continue;
            x.push_back(col_a[i]);
            y.push_back(col_b[i]);
        }
        if (x.size() < 3) {
            throw DataError("correlate_matrix: fewer than 3 complete pairs for (" + name_a +
                            ", " + name_b + ")");
        }
        CorrelationResult res;
        res.feature_a = name_a;
        res.feature_b = name_b;
        res.n = static_cast<int>(x.size());
        res.r = pearson(x, y);
        res.p = p_value(res.r, res.n);
        pvals.push_back(res.p);
        results.push_back(std::move(res));
    }

    const BhResult bh = bh_fdr(pvals, alpha);
    for (std::size_t i = 0; i < results.size(); ++i) {
        results[i].q = bh.q[i];
        results[i].significant = bh.reject[i];
        results[i].stars = stars_for_q(bh.q[i]);
    }
    std::sort(results.begin(), results.end(),
              [](const CorrelationResult& a, const CorrelationResult& b) {
                  if (a.q != b.q) return a.q < b.q;
                  if (a.feature_a != b.feature_a) return a.feature_a < b.feature_a;
                  return a.feature_b < b.feature_b;
              });
    return results;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

std::string report_to_csv(const std::vector<CorrelationResult>& results) {
    std::string out = "feature_a,feature_b,n,r,p,q,stars\n";
    for (const auto& res : results) {
        out += res.feature_a + ',' + res.feature_b + ',' + std::to_string(res.n) + ',' +
               format_double(res.r) + ',' + format_double(res.p) + ',' + format_double(res.q) +
               ',' + res.stars + '\n';
    }
    return out;
}

std::vector<CorrelationResult> report_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("feature_a,feature_b,n,r,p,q,stars", 0) != 0) {
        throw DataError("report CSV: bad header");
    }
    std::vector<CorrelationResult> results;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        CorrelationResult res;
        std::string n, r, p, q;
        if (!std::getline(row, res.feature_a, ',') || !std::getline(row, res.feature_b, ',') ||
            !std::getline(row, n, ',') || !std::getline(row, r, ',') ||
            !std::getline(row, p, ',') || !std::getline(row, q, ',')) {
            throw DataError("report CSV: malformed row: " + line);
        }
        std::getline(row, res.stars);
        res.n = std::stoi(n);
        res.r = std::stod(r);
        res.p = std::stod(p);
        res.q = std::stod(q);
        res.significant = !res.stars.empty() && res.q < 0.05;
        results.push_back(std::move(res));
    }
    return results;
}

void save_report_csv(const std::vector<CorrelationResult>& results,
                     const std::filesystem::path& path) {
    write_file(path, report_to_csv(results));
}

std::vector<CorrelationResult> load_report_csv(const std::filesystem::path& path) {
    return report_from_csv(read_file(path));
}

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string render_report_markdown(const std::vector<CorrelationResult>& results,
                                   bool significant_only) {
    std::string out = "| Feature 1 | Feature 2 | r |\n|---|---|---|\n";
    for (const auto& res : results) {
        if (significant_only && !res.significant) continue;
        out += "| " + res.feature_a + " | " + res.feature_b + " | " + fixed2(res.r) + res.stars +
               " |\n";
    }
    return out;
}

std::string render_matched_pairs_markdown(const std::vector<CorrelationResult>& results) {
    std::string out = "| Personality-Preference | r |\n|---|---|\n";
    for (const auto& res : results) {
        std::string a = res.feature_a.empty() ? "?" : res.feature_a.substr(res.feature_a.size() - 1);
        std::string b = res.feature_b.empty() ? "?" : res.feature_b.substr(res.feature_b.size() - 1);
        out += "| " + a + " - " + b + " | " + fixed2(res.r) + res.stars + " |\n";
    }
    return out;
}

std::string render_topic_report_markdown(const std::vector<CorrelationResult>& results,
                                         const std::vector<WordList>& topic_words) {
    std::string out = "| Topic | Top Words | Correlated Traits |\n|---|---|---|\n";
    for (std::size_t k = 0; k < topic_words.size(); ++k) {
        const std::string col = "topic_" + std::to_string(k);
        std::string words;
        for (const auto& e : topic_words[k]) {
            if (!words.empty()) words += ", ";
            words += e.word;
        }
        std::string traits;
        for (const auto& res : results) {
            if (!res.significant || res.r <= 0.0) continue;
            if (res.feature_a != col && res.feature_b != col) continue;
            const std::string& other = res.feature_a == col ? res.feature_b : res.feature_a;
            if (!traits.empty()) traits += ", ";
            traits += other.substr(other.size() - 1);
        }
        out += "| " + std::to_string(k) + " | " + words + " | " + traits + " |\n";
    }
    return out;
}

} // namespace traittopics
