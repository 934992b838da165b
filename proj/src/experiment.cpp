#include "rpt/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rpt/dataset_io.hpp"
#include "rpt/error.hpp"
#include "rpt/generators.hpp"
#include "rpt/potential.hpp"
#include "rpt/rng.hpp"

namespace rpt {

using nlohmann::json;

const char* generator_kind_name(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::doubling: return "doubling";
        case GeneratorKind::topic: return "topic";
        case GeneratorKind::adversarial: return "adversarial";
        case GeneratorKind::external: return "external";
    }
    return "unknown";
}

GeneratorKind generator_kind_from_name(const std::string& name) {
    if (name == "doubling") return GeneratorKind::doubling;
    if (name == "topic") return GeneratorKind::topic;
    if (name == "adversarial") return GeneratorKind::adversarial;
    if (name == "external" || name == "external-file") return GeneratorKind::external;
    throw validation_error("unknown generator kind: " + name);
}

void validate(const ExperimentConfig& c) {
    if (c.trials == 0) throw validation_error("config: trials must be >= 1");
    if (c.queries == 0) throw validation_error("config: queries must be >= 1");
    if (c.k == 0) throw validation_error("config: k must be >= 1");
    if (c.n_o == 0) throw validation_error("config: n_o must be >= 1");
    if (c.tree_kind != TreeKind::rp && !(c.alpha > 0.0 && c.alpha < 0.5))
        throw validation_error("config: alpha must lie in (0, 1/2)");
    if (!(c.delta > 0.0 && c.delta < 0.5))
        throw validation_error("config: delta must lie in (0, 1/2)");
    if (!(c.c_o > 0.0)) throw validation_error("config: c_o must be positive");
    if (c.tree_kind != TreeKind::rp && c.k > 1 &&
        !(static_cast<double>(c.k) <= c.alpha * static_cast<double>(c.n_o) / 2.0))
        throw validation_error("config: spill-family bounds need k <= alpha * n_o / 2");
    switch (c.generator) {
        case GeneratorKind::doubling:
            if (c.n == 0) throw validation_error("config: n must be >= 1");
            if (c.intrinsic_dim == 0 || c.d < c.intrinsic_dim)
                throw validation_error("config: need 1 <= intrinsic_dim <= d");
            break;
        case GeneratorKind::topic:
            if (c.n == 0) throw validation_error("config: n must be >= 1");
            if (c.vocab == 0 || c.topics == 0)
                throw validation_error("config: topic generator needs vocab and topics");
            if (!(c.target_length > 0.0 &&
                  c.target_length < 0.4 * static_cast<double>(c.vocab)))
                throw validation_error("config: target_length out of range for vocab");
            break;
        case GeneratorKind::adversarial:
            if (c.n == 0 || c.d == 0) throw validation_error("config: need n and d");
            if (!(c.spike > 1.0 && c.spike * c.spike > static_cast<double>(c.d)))
                throw validation_error("config: spike^2 must exceed d");
            if (c.queries != 1)
                throw validation_error(
                    "config: the adversarial instance has exactly one query (the origin)");
            break;
        case GeneratorKind::external:
            if (c.data_file.empty() || c.queries_file.empty())
                throw validation_error(
                    "config: external generator needs data_file and queries_file");
            break;
    }
    if (c.k > c.n && c.generator != GeneratorKind::external)
        throw validation_error("config: k exceeds the point count");
}

namespace {

struct Instance {
    Dataset data;
    std::vector<std::vector<double>> queries;
};

Instance materialize(const ExperimentConfig& c) {
    SplitRng base(c.seed);
    switch (c.generator) {
        case GeneratorKind::doubling: {
            DoublingParams params{c.intrinsic_dim, c.d, c.n, base.child(0).next_u64()};
            Dataset data = sample_doubling(params);
            std::vector<std::vector<double>> queries;
            queries.reserve(c.queries);
            for (std::size_t i = 0; i < c.queries; ++i)
                queries.push_back(sample_doubling_point(params, i));
            return {std::move(data), std::move(queries)};
        }
        case GeneratorKind::topic: {
            TopicModelParams params = random_topic_model(c.vocab, c.topics, c.target_length,
                                                         c.n, base.child(0).next_u64());
            Dataset data = sample_topic_model(params);
            std::vector<std::vector<double>> queries;
            queries.reserve(c.queries);
            for (std::size_t i = 0; i < c.queries; ++i)
                queries.push_back(sample_topic_document(params, i));
            return {std::move(data), std::move(queries)};
        }
        case GeneratorKind::adversarial: {
            AdversarialParams params{c.n, c.d, c.spike, base.child(0).next_u64()};
            AdversarialInstance inst = sample_adversarial(params);
            return {std::move(inst.data), {inst.query}};
        }
        case GeneratorKind::external: {
            Dataset data = load_dataset(c.data_file, DatasetFormat::binary);
            Dataset qdata = load_dataset(c.queries_file, DatasetFormat::binary);
            if (qdata.dim() != data.dim())
                throw validation_error("config: query file dimension mismatch");
            std::vector<std::vector<double>> queries;
            const std::size_t use = std::min(c.queries, qdata.size());
            for (std::size_t i = 0; i < use; ++i) {
                auto p = qdata.point(i);
                queries.emplace_back(p.begin(), p.end());
            }
            return {std::move(data), std::move(queries)};
        }
    }
    throw validation_error("config: unknown generator");
}

PartitionTree build_for(const ExperimentConfig& c, const Dataset& data, std::uint64_t seed) {
    switch (c.tree_kind) {
        case TreeKind::rp: return build_rp_tree(data, c.n_o, seed);
        case TreeKind::spill: return build_spill_tree(data, c.n_o, c.alpha, seed);
        case TreeKind::virtual_spill:
            return build_virtual_spill_tree(data, c.n_o, c.alpha, seed);
    }
    throw validation_error("config: unknown tree kind");
}

BoundReport bound_for(const ExperimentConfig& c, const NeighborOrdering& ordering) {
    if (c.tree_kind == TreeKind::rp) {
        const PotentialProfile profile = profile_for_levels(ordering, c.n_o, 0.75, c.k);
        return rp_failure_bound(profile, c.n_o, ordering.size(), c.k);
    }
    const double beta = c.tree_kind == TreeKind::spill ? 0.5 + c.alpha : 0.5;
    const PotentialProfile profile = profile_for_levels(ordering, c.n_o, beta, c.k);
    return spill_failure_bound(profile, c.alpha, c.n_o, ordering.size(), c.tree_kind, c.k);
}

}  // namespace

FailureReport run_experiment(const ExperimentConfig& config) {
    validate(config);
    Instance inst = materialize(config);
    const Dataset& data = inst.data;
    if (config.k > data.size())
        throw validation_error("config: k exceeds the point count");

    const std::size_t nq = inst.queries.size();
    std::vector<std::vector<std::uint64_t>> exact(nq);
    std::vector<double> query_bound(nq);
    FailureReport report;
    report.config = config;

    for (std::size_t qi = 0; qi < nq; ++qi) {
        QueryResult bf = brute_force_knn(data, inst.queries[qi], config.k);
        exact[qi] = bf.indices;
        std::sort(exact[qi].begin(), exact[qi].end());

        const NeighborOrdering ordering = neighbor_ordering(data, inst.queries[qi]);
        const BoundReport bound = bound_for(config, ordering);
        query_bound[qi] = bound.bound;
        if (qi == 0) {
            report.level_m = bound.level_m;
            report.per_level_phi.assign(bound.level_phi.size(), 0.0);
        }
        for (std::size_t l = 0; l < bound.level_phi.size(); ++l)
            report.per_level_phi[l] += bound.level_phi[l] / static_cast<double>(nq);
    }

    std::vector<std::size_t> query_failures(nq, 0);
    double scanned = 0.0;
    double visited = 0.0;
    SplitRng trial_seeds = SplitRng(config.seed).child(2);
    for (std::size_t t = 0; t < config.trials; ++t) {
        const PartitionTree tree = build_for(config, data, trial_seeds.child(t).next_u64());
        for (std::size_t qi = 0; qi < nq; ++qi) {
            QueryResult res = query(tree, data, inst.queries[qi], config.k);
            scanned += static_cast<double>(res.points_scanned);
            visited += static_cast<double>(res.leaves_visited);
            std::sort(res.indices.begin(), res.indices.end());
            if (res.indices != exact[qi]) ++query_failures[qi];
        }
    }

    report.total = config.trials * nq;
    for (std::size_t qi = 0; qi < nq; ++qi) report.failures += query_failures[qi];
    report.empirical_rate =
        static_cast<double>(report.failures) / static_cast<double>(report.total);
    report.standard_error = std::sqrt(report.empirical_rate * (1.0 - report.empirical_rate) /
                                      static_cast<double>(report.total));
    report.mean_points_scanned = scanned / static_cast<double>(report.total);
    report.mean_leaves_visited = visited / static_cast<double>(report.total);
    report.per_query_rate.resize(nq);
    for (std::size_t qi = 0; qi < nq; ++qi)
        report.per_query_rate[qi] =
            static_cast<double>(query_failures[qi]) / static_cast<double>(config.trials);
    report.per_query_bound = std::move(query_bound);
    report.theoretical_bound = 0.0;
    for (double b : report.per_query_bound) report.theoretical_bound += b;
    report.theoretical_bound /= static_cast<double>(nq);
    return report;
}

namespace {

json config_json(const ExperimentConfig& c) {
    return json{{"generator", generator_kind_name(c.generator)},
                {"tree_kind", tree_kind_name(c.tree_kind)},
                {"n", c.n},
                {"d", c.d},
                {"intrinsic_dim", c.intrinsic_dim},
                {"vocab", c.vocab},
                {"topics", c.topics},
                {"target_length", c.target_length},
                {"spike", c.spike},
                {"n_o", c.n_o},
                {"alpha", c.alpha},
                {"k", c.k},
                {"trials", c.trials},
                {"queries", c.queries},
                {"delta", c.delta},
                {"c_o", c.c_o},
                {"seed", c.seed},
                {"data_file", c.data_file},
                {"queries_file", c.queries_file}};
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.generator = generator_kind_from_name(j.value("generator", "doubling"));
    c.tree_kind = tree_kind_from_name(j.value("tree_kind", "rp"));
    c.n = j.value("n", std::size_t{0});
    c.d = j.value("d", std::size_t{0});
    c.intrinsic_dim = j.value("intrinsic_dim", std::size_t{2});
    c.vocab = j.value("vocab", std::size_t{0});
    c.topics = j.value("topics", std::size_t{1});
    c.target_length = j.value("target_length", 16.0);
    c.spike = j.value("spike", 1e6);
    c.n_o = j.value("n_o", std::uint32_t{1});
    c.alpha = j.value("alpha", 0.1);
    c.k = j.value("k", std::size_t{1});
    c.trials = j.value("trials", std::size_t{1});
    c.queries = j.value("queries", std::size_t{1});
    c.delta = j.value("delta", 0.05);
    c.c_o = j.value("c_o", 0.125);
    c.seed = j.value("seed", std::uint64_t{0});
    c.data_file = j.value("data_file", std::string{});
    c.queries_file = j.value("queries_file", std::string{});
    return c;
}

}  // namespace

std::string report_text(const FailureReport& r) {
    std::ostringstream out;
    out.precision(12);
    out << "generator            " << generator_kind_name(r.config.generator) << "\n"
        << "tree_kind            " << tree_kind_name(r.config.tree_kind) << "\n"
        << "n                    " << r.config.n << "\n"
        << "n_o                  " << r.config.n_o << "\n"
        << "alpha                " << r.config.alpha << "\n"
        << "k                    " << r.config.k << "\n"
        << "trials               " << r.config.trials << "\n"
        << "queries              " << r.config.queries << "\n"
        << "seed                 " << r.config.seed << "\n"
        << "failures             " << r.failures << " / " << r.total << "\n"
        << "empirical_rate       " << r.empirical_rate << "\n"
        << "standard_error       " << r.standard_error << "\n"
        << "theoretical_bound    " << r.theoretical_bound << "\n"
        << "mean_points_scanned  " << r.mean_points_scanned << "\n"
        << "mean_leaves_visited  " << r.mean_leaves_visited << "\n";
    out << "level_m             ";
    for (std::size_t m : r.level_m) out << " " << m;
    out << "\nlevel_phi           ";
    for (double v : r.per_level_phi) out << " " << v;
    out << "\n";
    return out.str();
}

void emit_report(const FailureReport& r, const std::string& path) {
    {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw io_error("cannot open for writing: " + path);
        out << report_text(r);
        if (!out) throw io_error("write failed: " + path);
    }
    json j{{"config", config_json(r.config)},
           {"failures", r.failures},
           {"total", r.total},
           {"empirical_rate", r.empirical_rate},
           {"standard_error", r.standard_error},
           {"theoretical_bound", r.theoretical_bound},
           {"level_m", r.level_m},
           {"per_level_phi", r.per_level_phi},
           {"mean_points_scanned", r.mean_points_scanned},
           {"mean_leaves_visited", r.mean_leaves_visited},
           {"per_query_rate", r.per_query_rate},
           {"per_query_bound", r.per_query_bound}};
    std::ofstream out(path + ".json", std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path + ".json");
    out << j.dump(2) << "\n";
    if (!out) throw io_error("write failed: " + path + ".json");
}

FailureReport load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw io_error(path + ": " + e.what());
    }
    FailureReport r;
    r.config = config_from_json(j.at("config"));
    r.failures = j.at("failures").get<std::size_t>();
    r.total = j.at("total").get<std::size_t>();
    r.empirical_rate = j.at("empirical_rate").get<double>();
    r.standard_error = j.at("standard_error").get<double>();
    r.theoretical_bound = j.at("theoretical_bound").get<double>();
    r.level_m = j.at("level_m").get<std::vector<std::size_t>>();
    r.per_level_phi = j.at("per_level_phi").get<std::vector<double>>();
    r.mean_points_scanned = j.at("mean_points_scanned").get<double>();
    r.mean_leaves_visited = j.at("mean_leaves_visited").get<double>();
    r.per_query_rate = j.at("per_query_rate").get<std::vector<double>>();
    r.per_query_bound = j.at("per_query_bound").get<std::vector<double>>();
    return r;
}

std::string config_to_json(const ExperimentConfig& config) {
    return config_json(config).dump(2);
}

ExperimentConfig config_from_json_text(const std::string& text) {
    try {
        return config_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw io_error(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return config_from_json_text(text);
}

}  // namespace rpt
