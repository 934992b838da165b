#pragma once

#include <cstdint>
#include <vector>

#include "rpt/dataset.hpp"

namespace rpt {

// Uniform measure on the unit ball of R^{intrinsic_dim}, embedded in the
// first intrinsic_dim coordinates of R^{ambient_dim}. The mass of a ball of
// radius r around an interior center grows like r^{intrinsic_dim}, so the
// sampled measure doubles by at most 2^{intrinsic_dim} per radius doubling.
struct DoublingParams {
    std::size_t intrinsic_dim = 2;
    std::size_t ambient_dim = 2;
    std::size_t n = 1;
    std::uint64_t seed = 0;
};

Dataset sample_doubling(const DoublingParams& params);

// One extra point from the same ball (used as a query).
std::vector<double> sample_doubling_point(const DoublingParams& params, std::uint64_t which);

// Mixture of Bernoulli product distributions over binary word-occurrence
// vectors: topic j is picked with probability weights[j], then coordinate i
// is set to 1 independently with probability word_probs[j][i].
struct TopicModelParams {
    std::size_t vocab_size = 0;                   // N
    std::vector<double> weights;                  // per-topic, sum to 1
    std::vector<std::vector<double>> word_probs;  // topics x N, entries in (0, 1/2)
    std::size_t n = 1;                            // documents to sample
    std::uint64_t seed = 0;
};

void validate_params(const TopicModelParams& params);

// Binary dataset of n documents; per-document topic labels are recorded in
// the dataset's labels().
Dataset sample_topic_model(const TopicModelParams& params);

// A fresh document from the model (used as a query); label_out, if non-null,
// receives its topic.
std::vector<double> sample_topic_document(const TopicModelParams& params, std::uint64_t which,
                                          std::uint32_t* label_out = nullptr);

struct TopicLengths {
    std::vector<double> per_topic;  // L_j = sum_i word_probs[j][i]
    double min = 0.0;               // L = min_j L_j
};

TopicLengths expected_lengths(const TopicModelParams& params);

// Random model whose word probabilities are rescaled so every topic's
// expected document length equals target_length (all entries kept < 1/2).
TopicModelParams random_topic_model(std::size_t vocab_size, std::size_t topics,
                                    double target_length, std::size_t n, std::uint64_t seed);

// Hard case for coordinate splits: the query is the origin, point 0 is the
// all-ones vector (the true nearest neighbor), and every other point has one
// random coordinate set to `spike` and the rest uniform in (0, 1). Requires
// spike^2 > d so that point 0 really is nearest.
struct AdversarialParams {
    std::size_t n = 2;
    std::size_t d = 2;
    double spike = 1e6;  // M
    std::uint64_t seed = 0;
};

struct AdversarialInstance {
    Dataset data;
    std::vector<double> query;
};

AdversarialInstance sample_adversarial(const AdversarialParams& params);

}  // namespace rpt
