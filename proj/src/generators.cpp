#include "rpt/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rpt/error.hpp"
#include "rpt/rng.hpp"

namespace rpt {

namespace {

// Point uniform on the unit ball of R^{d_o}: normalized Gaussian direction
// scaled by U^{1/d_o}.
void fill_ball_point(double* out, std::size_t d_o, SplitRng& rng) {
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (std::size_t j = 0; j < d_o; ++j) {
            out[j] = rng.next_gaussian();
            norm2 += out[j] * out[j];
        }
    } while (norm2 < 1e-300);
    const double r = std::pow(rng.next_double_open(), 1.0 / static_cast<double>(d_o));
    const double scale = r / std::sqrt(norm2);
    for (std::size_t j = 0; j < d_o; ++j) out[j] *= scale;
}

void validate_params(const DoublingParams& p) {
    if (p.intrinsic_dim == 0) throw validation_error("doubling: intrinsic_dim must be >= 1");
    if (p.ambient_dim < p.intrinsic_dim)
        throw validation_error("doubling: ambient_dim must be >= intrinsic_dim");
    if (p.n == 0) throw validation_error("doubling: n must be >= 1");
}

std::uint32_t pick_topic(const TopicModelParams& p, double u) {
    double cum = 0.0;
    for (std::size_t j = 0; j + 1 < p.weights.size(); ++j) {
        cum += p.weights[j];
        if (u < cum) return static_cast<std::uint32_t>(j);
    }
    return static_cast<std::uint32_t>(p.weights.size() - 1);
}

void fill_document(double* out, const TopicModelParams& p, SplitRng& rng,
                   std::uint32_t* label_out) {
    const std::uint32_t topic = pick_topic(p, rng.next_double());
    const std::vector<double>& probs = p.word_probs[topic];
    for (std::size_t i = 0; i < p.vocab_size; ++i)
        out[i] = rng.next_double() < probs[i] ? 1.0 : 0.0;
    if (label_out != nullptr) *label_out = topic;
}

}  // namespace

Dataset sample_doubling(const DoublingParams& params) {
    validate_params(params);
    const std::size_t d = params.ambient_dim;
    std::vector<double> pts(params.n * d, 0.0);
    SplitRng base(params.seed);
    for (std::size_t i = 0; i < params.n; ++i) {
        SplitRng stream = base.child(i);
        fill_ball_point(pts.data() + i * d, params.intrinsic_dim, stream);
    }
    std::ostringstream prov;
    prov << "doubling(intrinsic_dim=" << params.intrinsic_dim << ",ambient_dim=" << d
         << ",n=" << params.n << ",seed=" << params.seed << ")";
    return Dataset(std::move(pts), params.n, d, "doubling", prov.str());
}

std::vector<double> sample_doubling_point(const DoublingParams& params, std::uint64_t which) {
    validate_params(params);
    std::vector<double> q(params.ambient_dim, 0.0);
    // Query streams hang off a separate branch so they never collide with
    // the dataset's per-point streams.
    SplitRng stream = SplitRng(params.seed).child(0x71u).child(which);
    fill_ball_point(q.data(), params.intrinsic_dim, stream);
    return q;
}

void validate_params(const TopicModelParams& params) {
    const std::size_t t = params.weights.size();
    if (params.vocab_size == 0) throw validation_error("topic model: vocab_size must be >= 1");
    if (t == 0) throw validation_error("topic model: need at least one topic");
    if (params.word_probs.size() != t)
        throw validation_error("topic model: word_probs rows must match weights");
    if (params.n == 0) throw validation_error("topic model: n must be >= 1");
    double sum = 0.0;
    for (double w : params.weights) {
        if (w < 0.0) throw validation_error("topic model: weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw validation_error("topic model: weights must sum to 1 (got " +
                               std::to_string(sum) + ")");
    for (const auto& row : params.word_probs) {
        if (row.size() != params.vocab_size)
            throw validation_error("topic model: word_probs row length must equal vocab_size");
        for (double p : row)
            if (!(p > 0.0 && p < 0.5))
                throw validation_error(
                    "topic model: word probabilities must lie strictly in (0, 1/2)");
    }
}

Dataset sample_topic_model(const TopicModelParams& params) {
    validate_params(params);
    const std::size_t N = params.vocab_size;
    std::vector<double> pts(params.n * N);
    std::vector<std::uint32_t> labels(params.n);
    SplitRng base(params.seed);
    for (std::size_t i = 0; i < params.n; ++i) {
        SplitRng stream = base.child(i);
        fill_document(pts.data() + i * N, params, stream, &labels[i]);
    }
    std::ostringstream prov;
    prov << "topic(vocab=" << N << ",topics=" << params.weights.size() << ",n=" << params.n
         << ",seed=" << params.seed << ")";
    Dataset data(std::move(pts), params.n, N, "topic", prov.str());
    data.set_labels(std::move(labels));
    return data;
}

std::vector<double> sample_topic_document(const TopicModelParams& params, std::uint64_t which,
                                          std::uint32_t* label_out) {
    validate_params(params);
    std::vector<double> doc(params.vocab_size);
    SplitRng stream = SplitRng(params.seed).child(0x71u).child(which);
    fill_document(doc.data(), params, stream, label_out);
    return doc;
}

TopicLengths expected_lengths(const TopicModelParams& params) {
    validate_params(params);
    TopicLengths out;
    out.per_topic.reserve(params.word_probs.size());
    for (const auto& row : params.word_probs) {
        double sum = 0.0;
        for (double p : row) sum += p;
        out.per_topic.push_back(sum);
    }
    out.min = *std::min_element(out.per_topic.begin(), out.per_topic.end());
    return out;
}

TopicModelParams random_topic_model(std::size_t vocab_size, std::size_t topics,
                                    double target_length, std::size_t n, std::uint64_t seed) {
    if (topics == 0) throw validation_error("random_topic_model: need at least one topic");
    if (!(target_length > 0.0))
        throw validation_error("random_topic_model: target_length must be positive");
    if (!(target_length < 0.4 * static_cast<double>(vocab_size)))
        throw validation_error(
            "random_topic_model: target_length too large for the vocabulary "
            "(word probabilities must stay below 1/2)");
    TopicModelParams params;
    params.vocab_size = vocab_size;
    params.n = n;
    params.seed = seed;
    params.weights.assign(topics, 1.0 / static_cast<double>(topics));
    // Exact sum-to-1 regardless of rounding.
    params.weights.back() =
        1.0 - (1.0 / static_cast<double>(topics)) * static_cast<double>(topics - 1);
    SplitRng base = SplitRng(seed).child(0xA0u);
    params.word_probs.resize(topics);
    for (std::size_t j = 0; j < topics; ++j) {
        SplitRng stream = base.child(j);
        std::vector<double>& row = params.word_probs[j];
        row.resize(vocab_size);
        for (int attempt = 0;; ++attempt) {
            double sum = 0.0;
            for (double& p : row) {
                p = 0.4 + 1.2 * stream.next_double();  // shape ratio max/mean <= 4
                sum += p;
            }
            const double scale = target_length / sum;
            bool ok = true;
            for (double& p : row) {
                p *= scale;
                if (!(p > 0.0 && p < 0.5)) ok = false;
            }
            if (ok) break;
            if (attempt > 64)
                throw validation_error("random_topic_model: could not keep probabilities < 1/2");
        }
    }
    return params;
}

AdversarialInstance sample_adversarial(const AdversarialParams& params) {
    if (params.n == 0) throw validation_error("adversarial: n must be >= 1");
    if (params.d == 0) throw validation_error("adversarial: d must be >= 1");
    if (!(params.spike > 1.0)) throw validation_error("adversarial: spike must exceed 1");
    if (!(params.spike * params.spike > static_cast<double>(params.d)))
        throw validation_error(
            "adversarial: spike^2 must exceed d so the all-ones point is nearest");
    const std::size_t d = params.d;
    std::vector<double> pts(params.n * d);
    for (std::size_t j = 0; j < d; ++j) pts[j] = 1.0;  // point 0: all ones
    SplitRng base(params.seed);
    for (std::size_t i = 1; i < params.n; ++i) {
        SplitRng stream = base.child(i);
        double* row = pts.data() + i * d;
        const std::size_t spike_coord = stream.uniform_index(d);
        // Strictly inside (0, 1): half-ulp offset keeps the endpoints out.
        for (std::size_t j = 0; j < d; ++j) row[j] = stream.next_double() + 0x1.0p-54;
        row[spike_coord] = params.spike;
    }
    std::ostringstream prov;
    prov << "adversarial(n=" << params.n << ",d=" << d << ",spike=" << params.spike
         << ",seed=" << params.seed << ")";
    AdversarialInstance inst{Dataset(std::move(pts), params.n, d, "adversarial", prov.str()),
                             std::vector<double>(d, 0.0)};
    return inst;
}

}  // namespace rpt
