#include "rpt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rpt/error.hpp"
#include "rpt/linalg.hpp"

namespace rpt {

namespace {

constexpr double kE = 2.71828182845904523536;

// phi value at the largest profile grid entry <= m.
double profile_lookup(const PotentialProfile& profile, std::size_t m) {
    auto it = std::upper_bound(profile.m_grid.begin(), profile.m_grid.end(), m);
    if (it == profile.m_grid.begin())
        throw validation_error("bound: profile has no grid entry at or below m = " +
                               std::to_string(m));
    const std::size_t pos = static_cast<std::size_t>(it - profile.m_grid.begin()) - 1;
    return profile.values[pos];
}

double xlog_term(double x) { return x <= 0.0 ? 0.0 : x * std::log(2.0 * kE / x); }

}  // namespace

QueryResult brute_force_knn(const Dataset& data, std::span<const double> q, std::size_t k) {
    if (k == 0) throw validation_error("brute_force_knn: k must be >= 1");
    if (k > data.size())
        throw validation_error("brute_force_knn: k = " + std::to_string(k) +
                               " exceeds point count " + std::to_string(data.size()));
    std::vector<std::pair<double, std::uint64_t>> scored(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        scored[i] = {euclidean_distance(q, data.point(i)), static_cast<std::uint64_t>(i)};
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
    QueryResult result;
    result.indices.reserve(k);
    result.distances.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        result.distances.push_back(scored[i].first);
        result.indices.push_back(scored[i].second);
    }
    result.points_scanned = data.size();
    result.leaves_visited = 0;
    return result;
}

PoissonBinomial poisson_binomial_pmf(std::span<const double> probs,
                                     std::optional<std::size_t> truncate) {
    if (probs.empty()) throw validation_error("poisson_binomial_pmf: empty probabilities");
    if (probs.size() > 100000)
        throw validation_error("poisson_binomial_pmf: too many terms; use truncation");
    for (double p : probs)
        if (!(p > 0.0 && p < 1.0))
            throw validation_error(
                "poisson_binomial_pmf: probabilities must lie strictly in (0, 1)");

    const std::size_t N = probs.size();
    const std::size_t cap = truncate ? std::min(*truncate, N) : N;
    std::vector<double> pmf(cap + 1, 0.0);
    pmf[0] = 1.0;
    std::size_t support = 0;  // highest reachable count so far
    for (std::size_t t = 0; t < N; ++t) {
        const double p = probs[t];
        support = std::min(support + 1, cap);
        for (std::size_t j = support; j >= 1; --j)
            pmf[j] = pmf[j] * (1.0 - p) + pmf[j - 1] * p;
        pmf[0] *= 1.0 - p;
    }

    PoissonBinomial out;
    out.probs.assign(probs.begin(), probs.end());
    out.pmf = std::move(pmf);
    if (cap < N) {
        out.truncated_at = cap;
        double total = 0.0;
        for (double v : out.pmf) total += v;
        out.tail_mass = std::max(0.0, 1.0 - total);
    }
    return out;
}

std::vector<double> hamming_distance_distribution(std::span<const double> q,
                                                  const TopicModelParams& params) {
    validate_params(params);
    if (q.size() != params.vocab_size)
        throw validation_error("hamming_distance_distribution: query length must equal vocab");
    for (double v : q)
        if (v != 0.0 && v != 1.0)
            throw validation_error("hamming_distance_distribution: query must be binary");

    const std::size_t N = params.vocab_size;
    std::vector<double> mixture(N + 1, 0.0);
    std::vector<double> a(N);
    for (std::size_t j = 0; j < params.weights.size(); ++j) {
        for (std::size_t i = 0; i < N; ++i) {
            const double p = params.word_probs[j][i];
            a[i] = q[i] == 0.0 ? p : 1.0 - p;
        }
        const PoissonBinomial pb = poisson_binomial_pmf(a);
        for (std::size_t l = 0; l <= N; ++l) mixture[l] += params.weights[j] * pb.pmf[l];
    }
    return mixture;
}

std::size_t compute_v(std::span<const double> q, const TopicModelParams& params,
                      std::size_t n, std::size_t k, double delta) {
    if (n == 0) throw validation_error("compute_v: n must be >= 1");
    if (k == 0) throw validation_error("compute_v: k must be >= 1");
    if (!(delta > 0.0 && delta < 1.0))
        throw validation_error("compute_v: delta must lie in (0, 1)");
    const double threshold = (8.0 / static_cast<double>(n)) *
                             std::max(static_cast<double>(k), std::log(1.0 / delta));
    if (threshold > 1.0)
        throw validation_error("compute_v: n too small, the cdf never reaches " +
                               std::to_string(threshold));
    const std::vector<double> pmf = hamming_distance_distribution(q, params);
    double cdf = 0.0;
    for (std::size_t v = 0; v < pmf.size(); ++v) {
        cdf += pmf[v];
        if (cdf >= threshold) return v;
    }
    return pmf.size() - 1;
}

std::string bound_report_text(const BoundReport& report) {
    std::ostringstream out;
    out.precision(12);
    out << "kind          " << tree_kind_name(report.kind) << "\n"
        << "k             " << report.k << "\n"
        << "n             " << report.n << "\n"
        << "n_o           " << report.n_o << "\n"
        << "alpha         " << report.alpha << "\n"
        << "beta          " << report.beta << "\n"
        << "levels        " << report.level_m.size() << "\n";
    out << "level_m      ";
    for (std::size_t m : report.level_m) out << " " << m;
    out << "\nlevel_phi    ";
    for (double v : report.level_phi) out << " " << v;
    out << "\nraw           " << report.raw << "\n"
        << "bound         " << report.bound << "\n";
    return out.str();
}

BoundReport spill_failure_bound(const PotentialProfile& profile, double alpha,
                                std::size_t n_o, std::size_t n, TreeKind kind, std::size_t k) {
    if (kind == TreeKind::rp)
        throw validation_error("spill_failure_bound: kind must be spill or virtual-spill");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw validation_error("spill_failure_bound: alpha must lie in (0, 1/2)");
    if (k == 0) throw validation_error("spill_failure_bound: k must be >= 1");
    if (profile.k != k)
        throw validation_error("spill_failure_bound: profile was built for k = " +
                               std::to_string(profile.k));
    if (k > 1 && !(static_cast<double>(k) <= alpha * static_cast<double>(n_o) / 2.0))
        throw validation_error("spill_failure_bound: requires k <= alpha * n_o / 2");

    BoundReport report;
    report.kind = kind;
    report.alpha = alpha;
    report.beta = kind == TreeKind::spill ? 0.5 + alpha : 0.5;
    report.n = n;
    report.n_o = n_o;
    report.k = k;
    report.level_m = level_m_grid(n, n_o, report.beta);

    double sum = 0.0;
    for (std::size_t m : report.level_m) {
        const double value = profile_lookup(profile, std::max(m, k + 1));
        report.level_phi.push_back(value);
        sum += value;
    }
    report.raw = k == 1 ? sum / (2.0 * alpha) : static_cast<double>(k) / alpha * sum;
    report.bound = std::clamp(report.raw, 0.0, 1.0);
    return report;
}

BoundReport rp_failure_bound(const PotentialProfile& profile, std::size_t n_o, std::size_t n,
                             std::size_t k) {
    if (k == 0) throw validation_error("rp_failure_bound: k must be >= 1");
    if (profile.k != k)
        throw validation_error("rp_failure_bound: profile was built for k = " +
                               std::to_string(profile.k));

    BoundReport report;
    report.kind = TreeKind::rp;
    report.beta = 0.75;
    report.n = n;
    report.n_o = n_o;
    report.k = k;
    report.level_m = level_m_grid(n, n_o, report.beta);

    double sum = 0.0;
    for (std::size_t m : report.level_m) {
        const double value = profile_lookup(profile, std::max(m, k + 1));
        report.level_phi.push_back(value);
        if (k == 1) {
            sum += xlog_term(value);
        } else {
            const double kv = static_cast<double>(k) * value;
            sum += kv <= 0.0 ? 0.0 : 2.0 * kv * std::log(2.0 * kE / kv);
        }
    }
    report.raw = sum;
    if (k > 1)
        report.raw += 16.0 * static_cast<double>(k - 1) / static_cast<double>(n_o);
    report.bound = std::clamp(report.raw, 0.0, 1.0);
    return report;
}

double doubling_phi_bound(std::size_t m, double d_o, double delta, std::size_t k) {
    if (m < 2) throw validation_error("doubling_phi_bound: m must be >= 2");
    if (!(d_o >= 2.0)) throw validation_error("doubling_phi_bound: d_o must be >= 2");
    if (!(delta > 0.0 && delta < 0.5))
        throw validation_error("doubling_phi_bound: delta must lie in (0, 1/2)");
    if (k == 0) throw validation_error("doubling_phi_bound: k must be >= 1");
    const double md = static_cast<double>(m);
    const double lg = std::log(1.0 / delta);
    if (k == 1) return 6.0 * std::pow(2.0 * lg / md, 1.0 / d_o);
    return 6.0 * std::pow(8.0 * std::max(static_cast<double>(k), lg) / md, 1.0 / d_o);
}

double topic_phi_bound(std::size_t v, double L, std::size_t n, std::size_t m, double c_o) {
    if (m == 0 || n == 0 || m > n) throw validation_error("topic_phi_bound: need 1 <= m <= n");
    if (!(c_o > 0.0)) throw validation_error("topic_phi_bound: c_o must be positive");
    if (!(L > 0.0)) throw validation_error("topic_phi_bound: L must be positive");
    const double denom =
        c_o * L - std::log2(static_cast<double>(n) / static_cast<double>(m));
    if (!(denom > 0.0))
        throw validation_error("topic_phi_bound: c_o * L must exceed log2(n/m)");
    if (v == 0) return 0.0;
    return 4.0 * std::sqrt(static_cast<double>(v) / denom);
}

double summation_lemma_bound(double A, double B, double d_o, double beta, std::size_t n_o,
                             bool with_log) {
    if (!(A > 0.0 && B > 0.0)) throw validation_error("summation_lemma_bound: A, B > 0");
    if (!(d_o >= 1.0)) throw validation_error("summation_lemma_bound: d_o must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw validation_error("summation_lemma_bound: beta must lie in (0, 1)");
    if (n_o == 0) throw validation_error("summation_lemma_bound: n_o must be >= 1");
    const double no = static_cast<double>(n_o);
    const double plain = A * d_o / (1.0 - beta) * std::pow(B / no, 1.0 / d_o);
    if (!with_log) return plain;
    if (!(no >= B * std::pow(A / 2.0, d_o)))
        throw validation_error("summation_lemma_bound: log variant requires n_o >= B (A/2)^d_o");
    return plain * (std::log(1.0 / beta) / (1.0 - beta) + std::log(2.0 * kE / A) +
                    std::log(no / B) / d_o);
}

double doubling_failure_bound(std::size_t k, double d_o, double alpha, std::size_t n_o,
                              double delta, double c_o, TreeKind kind) {
    if (k == 0) throw validation_error("doubling_failure_bound: k must be >= 1");
    if (!(d_o >= 2.0)) throw validation_error("doubling_failure_bound: d_o must be >= 2");
    if (!(delta > 0.0 && delta < 0.5))
        throw validation_error("doubling_failure_bound: delta must lie in (0, 1/2)");
    if (!(c_o > 0.0)) throw validation_error("doubling_failure_bound: c_o must be positive");
    if (n_o == 0) throw validation_error("doubling_failure_bound: n_o must be >= 1");
    const double kd = static_cast<double>(k);
    const double no = static_cast<double>(n_o);
    const double tail = std::max(kd, std::log(1.0 / delta));
    const double core = std::pow(8.0 * tail / no, 1.0 / d_o);
    double raw;
    if (kind == TreeKind::rp) {
        if (!(no >= c_o * std::pow(3.0 * kd, d_o) * tail))
            throw validation_error(
                "doubling_failure_bound: rp variant requires n_o >= c_o (3k)^d_o max(k, ln 1/delta)");
        raw = c_o * kd * (d_o + std::log(no)) * core;
    } else {
        if (!(alpha > 0.0 && alpha < 0.5))
            throw validation_error("doubling_failure_bound: alpha must lie in (0, 1/2)");
        raw = c_o * d_o * kd / alpha * core;
    }
    return std::min(1.0, raw);
}

}  // namespace rpt
