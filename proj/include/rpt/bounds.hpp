#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpt/dataset.hpp"
#include "rpt/generators.hpp"
#include "rpt/potential.hpp"
#include "rpt/query_result.hpp"
#include "rpt/tree.hpp"

namespace rpt {

// Exact k nearest neighbors by linear scan; ties broken by index.
QueryResult brute_force_knn(const Dataset& data, std::span<const double> q, std::size_t k);

// Distribution of a sum of independent Bernoulli variables with success
// probabilities `probs`, computed exactly by convolving one variable at a
// time. With a truncation point the pmf is kept only up to that count and
// the dropped upper tail is reported in tail_mass.
struct PoissonBinomial {
    std::vector<double> probs;
    std::vector<double> pmf;  // pmf[l] = Pr(sum = l); length N+1 (or truncate+1)
    std::optional<std::size_t> truncated_at;
    double tail_mass = 0.0;
};

PoissonBinomial poisson_binomial_pmf(std::span<const double> probs,
                                     std::optional<std::size_t> truncate = std::nullopt);

// Exact law of the Hamming distance from a fixed binary query to a document
// drawn from the mixture model: sum over topics of w_j times the
// Poisson-binomial pmf with a_i = p_i (q_i = 0) or 1 - p_i (q_i = 1).
std::vector<double> hamming_distance_distribution(std::span<const double> q,
                                                  const TopicModelParams& params);

// Smallest v such that Pr(hamming distance <= v) >= (8/n) max(k, ln(1/delta)).
std::size_t compute_v(std::span<const double> q, const TopicModelParams& params,
                      std::size_t n, std::size_t k, double delta);

// Per-level potential values and the resulting failure-probability bound.
struct BoundReport {
    TreeKind kind = TreeKind::rp;
    double alpha = 0.0;
    double beta = 0.0;                // per-level shrink factor
    std::size_t n = 0;
    std::size_t n_o = 0;
    std::size_t k = 1;
    std::vector<std::size_t> level_m;  // beta^i * n, rounded down, clamped >= 2
    std::vector<double> level_phi;
    double raw = 0.0;    // the summation formula, unclamped
    double bound = 0.0;  // clamped to [0, 1]
};

std::string bound_report_text(const BoundReport& report);

// Failure bound for spill-family trees: (1/2a) sum_i phi_{b^i n} for k = 1,
// (k/a) sum_i phi_{k, b^i n} for k > 1 (requires k <= a n_o / 2), where
// b = 1/2 + a for spill trees and b = 1/2 for virtual spill trees. Per-level
// phi values are looked up in the profile at the largest grid entry <= the
// level size.
BoundReport spill_failure_bound(const PotentialProfile& profile, double alpha,
                                std::size_t n_o, std::size_t n, TreeKind kind, std::size_t k);

// Failure bound for rp trees with b = 3/4: sum_i phi ln(2e/phi) for k = 1;
// 2k sum_i phi_k ln(2e/(k phi_k)) + 16(k-1)/n_o for k > 1. Terms vanish as
// phi -> 0.
BoundReport rp_failure_bound(const PotentialProfile& profile, std::size_t n_o, std::size_t n,
                             std::size_t k);

// Potential bound for data from a doubling measure of dimension d_o >= 2:
// 6 (2 ln(1/delta) / m)^{1/d_o} for k = 1, and
// 6 (8 max(k, ln(1/delta)) / m)^{1/d_o} for k > 1.
double doubling_phi_bound(std::size_t m, double d_o, double delta, std::size_t k);

// Potential bound for topic-model data: 4 sqrt(v / (c_o L - log2(n/m))).
// The denominator must be positive.
double topic_phi_bound(std::size_t v, double L, std::size_t n, std::size_t m, double c_o);

// Closed form upper bound for sum_{i=0..l} F(beta^i n) when
// F(m) <= A (B/m)^{1/d_o} for all m >= n_o: (A d_o / (1-beta)) (B/n_o)^{1/d_o}.
// The with_log variant bounds sum F ln(2e/F) instead and requires
// n_o >= B (A/2)^{d_o}.
double summation_lemma_bound(double A, double B, double d_o, double beta, std::size_t n_o,
                             bool with_log);

// End-to-end failure bounds for doubling data, up to the calibrated constant
// c_o. spill: (c_o d_o k / alpha) (8 max(k, ln 1/delta) / n_o)^{1/d_o}.
// rp: c_o k (d_o + ln n_o) (8 max(k, ln 1/delta) / n_o)^{1/d_o}, requiring
// n_o >= c_o (3k)^{d_o} max(k, ln 1/delta). Clamped to <= 1.
double doubling_failure_bound(std::size_t k, double d_o, double alpha, std::size_t n_o,
                              double delta, double c_o, TreeKind kind);

}  // namespace rpt
