// Command-line surface: generate datasets, build and persist trees, run
// k-NN queries, evaluate potential profiles, run failure-rate experiments,
// and evaluate the closed-form bound calculators.
//
// Exit codes: 0 success, 2 validation error, 3 I/O error, 4 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpt/bounds.hpp"
#include "rpt/dataset_io.hpp"
#include "rpt/error.hpp"
#include "rpt/experiment.hpp"
#include "rpt/generators.hpp"
#include "rpt/potential.hpp"
#include "rpt/tree.hpp"
#include "rpt/tree_io.hpp"

namespace {

using nlohmann::json;

rpt::Dataset load_data(const std::string& path, const std::string& format) {
    return rpt::load_dataset(path, rpt::dataset_format_from_name(format));
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw rpt::io_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw rpt::io_error("write failed: " + path);
}

struct GenOptions {
    std::string kind;
    std::string out;
    std::string format = "binary";
    std::string query_out;
    std::string params_out;
    std::size_t n = 1000;
    std::size_t d = 2;
    std::size_t intrinsic_dim = 2;
    std::size_t vocab = 1000;
    std::size_t topics = 5;
    double target_length = 32.0;
    double spike = 1e6;
    std::uint64_t seed = 0;
};

int run_gen(const GenOptions& opt) {
    const auto format = rpt::dataset_format_from_name(opt.format);
    json params_echo;
    if (opt.kind == "doubling") {
        rpt::DoublingParams params{opt.intrinsic_dim, opt.d, opt.n, opt.seed};
        rpt::save_dataset(rpt::sample_doubling(params), opt.out, format);
        params_echo = {{"kind", "doubling"},
                       {"intrinsic_dim", params.intrinsic_dim},
                       {"ambient_dim", params.ambient_dim},
                       {"n", params.n},
                       {"seed", params.seed}};
    } else if (opt.kind == "topic") {
        rpt::TopicModelParams params =
            rpt::random_topic_model(opt.vocab, opt.topics, opt.target_length, opt.n, opt.seed);
        rpt::save_dataset(rpt::sample_topic_model(params), opt.out, format);
        const rpt::TopicLengths lengths = rpt::expected_lengths(params);
        params_echo = {{"kind", "topic"},          {"vocab", opt.vocab},
                       {"topics", opt.topics},     {"target_length", opt.target_length},
                       {"n", opt.n},               {"seed", opt.seed},
                       {"expected_length_min", lengths.min}};
    } else if (opt.kind == "adversarial") {
        rpt::AdversarialParams params{opt.n, opt.d, opt.spike, opt.seed};
        rpt::AdversarialInstance inst = rpt::sample_adversarial(params);
        rpt::save_dataset(inst.data, opt.out, format);
        if (!opt.query_out.empty()) {
            rpt::Dataset qset(inst.query, 1, opt.d, "adversarial-query", "query");
            rpt::save_dataset(qset, opt.query_out, format);
        }
        params_echo = {{"kind", "adversarial"},
                       {"n", opt.n},
                       {"d", opt.d},
                       {"spike", opt.spike},
                       {"seed", opt.seed}};
    } else {
        throw rpt::validation_error("gen: unknown kind " + opt.kind);
    }
    if (!opt.params_out.empty()) write_text(opt.params_out, params_echo.dump(2) + "\n");
    std::cout << "wrote " << opt.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized partition trees for exact nearest-neighbor search"};
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "Generate a synthetic dataset");
    cmd_gen->add_option("--kind", gen.kind, "doubling | topic | adversarial")->required();
    cmd_gen->add_option("--out", gen.out, "output dataset file")->required();
    cmd_gen->add_option("--format", gen.format, "binary | csv");
    cmd_gen->add_option("--n", gen.n, "number of points");
    cmd_gen->add_option("--d", gen.d, "ambient dimension");
    cmd_gen->add_option("--intrinsic-dim", gen.intrinsic_dim, "doubling: intrinsic dimension");
    cmd_gen->add_option("--vocab", gen.vocab, "topic: vocabulary size");
    cmd_gen->add_option("--topics", gen.topics, "topic: number of topics");
    cmd_gen->add_option("--target-length", gen.target_length,
                        "topic: expected document length per topic");
    cmd_gen->add_option("--spike", gen.spike, "adversarial: spike value M");
    cmd_gen->add_option("--seed", gen.seed, "generator seed");
    cmd_gen->add_option("--query-out", gen.query_out, "adversarial: write the query point");
    cmd_gen->add_option("--params-out", gen.params_out, "write generator params as JSON");

    struct {
        std::string data, format = "binary", kind, out;
        std::uint32_t n_o = 50;
        double alpha = 0.1;
        std::uint64_t seed = 0;
    } build;
    CLI::App* cmd_build = app.add_subcommand("build", "Build a tree over a dataset");
    cmd_build->add_option("--data", build.data)->required();
    cmd_build->add_option("--format", build.format, "binary | csv");
    cmd_build->add_option("--kind", build.kind, "rp | spill | virtual-spill")->required();
    cmd_build->add_option("--n-o", build.n_o, "leaf capacity");
    cmd_build->add_option("--alpha", build.alpha, "overlap fraction (spill family)");
    cmd_build->add_option("--seed", build.seed);
    cmd_build->add_option("--out", build.out, "output tree file")->required();

    struct {
        std::string tree, data, queries, format = "binary", out;
        std::size_t k = 1;
    } q;
    CLI::App* cmd_query = app.add_subcommand("query", "Answer k-NN queries defeatist-style");
    cmd_query->add_option("--tree", q.tree)->required();
    cmd_query->add_option("--data", q.data)->required();
    cmd_query->add_option("--queries", q.queries)->required();
    cmd_query->add_option("--format", q.format, "binary | csv");
    cmd_query->add_option("--k", q.k);
    cmd_query->add_option("--out", q.out, "output file (default stdout)");

    struct {
        std::string data, queries, format = "binary", out, json_out;
        std::size_t k = 1;
        std::uint32_t n_o = 0;
        double beta = 0.0;
        std::string m_grid;
    } phi_opt;
    CLI::App* cmd_phi = app.add_subcommand("phi", "Evaluate potential profiles");
    cmd_phi->add_option("--data", phi_opt.data)->required();
    cmd_phi->add_option("--queries", phi_opt.queries)->required();
    cmd_phi->add_option("--format", phi_opt.format, "binary | csv");
    cmd_phi->add_option("--k", phi_opt.k);
    cmd_phi->add_option("--n-o", phi_opt.n_o, "leaf capacity for the level grid");
    cmd_phi->add_option("--beta", phi_opt.beta, "per-level shrink factor for the level grid");
    cmd_phi->add_option("--m-grid", phi_opt.m_grid, "comma-separated m values");
    cmd_phi->add_option("--out", phi_opt.out, "columnar output (default stdout)");
    cmd_phi->add_option("--json-out", phi_opt.json_out, "profile JSON for `bounds tree-failure`");

    struct {
        std::string config, out = "report.txt";
        std::optional<std::uint64_t> seed;
    } bench;
    CLI::App* cmd_bench = app.add_subcommand("bench", "Run a failure-rate experiment");
    cmd_bench->add_option("--config", bench.config, "experiment config JSON")->required();
    cmd_bench->add_option("--seed", bench.seed, "run seed (required for determinism)")
        ->required();
    cmd_bench->add_option("--out", bench.out, "report path (JSON twin written alongside)");

    CLI::App* cmd_bounds = app.add_subcommand("bounds", "Closed-form bound calculators");
    cmd_bounds->require_subcommand(1);
    struct {
        std::size_t m = 100, k = 1;
        double d_o = 2.0, delta = 0.05;
    } dphi;
    CLI::App* cmd_dphi = cmd_bounds->add_subcommand("doubling-phi");
    cmd_dphi->add_option("--m", dphi.m)->required();
    cmd_dphi->add_option("--d-o", dphi.d_o)->required();
    cmd_dphi->add_option("--delta", dphi.delta);
    cmd_dphi->add_option("--k", dphi.k);

    struct {
        std::size_t v = 0, n = 1, m = 1;
        double L = 1.0, c_o = 0.125;
    } tphi;
    CLI::App* cmd_tphi = cmd_bounds->add_subcommand("topic-phi");
    cmd_tphi->add_option("--v", tphi.v)->required();
    cmd_tphi->add_option("--L", tphi.L)->required();
    cmd_tphi->add_option("--n", tphi.n)->required();
    cmd_tphi->add_option("--m", tphi.m)->required();
    cmd_tphi->add_option("--c-o", tphi.c_o);

    struct {
        double A = 1.0, B = 1.0, d_o = 2.0, beta = 0.5;
        std::size_t n_o = 1;
        bool with_log = false;
    } summ;
    CLI::App* cmd_summ = cmd_bounds->add_subcommand("summation");
    cmd_summ->add_option("--A", summ.A)->required();
    cmd_summ->add_option("--B", summ.B)->required();
    cmd_summ->add_option("--d-o", summ.d_o)->required();
    cmd_summ->add_option("--beta", summ.beta)->required();
    cmd_summ->add_option("--n-o", summ.n_o)->required();
    cmd_summ->add_flag("--with-log", summ.with_log);

    struct {
        std::size_t k = 1, n_o = 100;
        double d_o = 2.0, alpha = 0.1, delta = 0.05, c_o = 0.125;
        std::string kind = "spill";
    } dfail;
    CLI::App* cmd_dfail = cmd_bounds->add_subcommand("doubling-failure");
    cmd_dfail->add_option("--k", dfail.k);
    cmd_dfail->add_option("--d-o", dfail.d_o)->required();
    cmd_dfail->add_option("--alpha", dfail.alpha);
    cmd_dfail->add_option("--n-o", dfail.n_o)->required();
    cmd_dfail->add_option("--delta", dfail.delta);
    cmd_dfail->add_option("--c-o", dfail.c_o);
    cmd_dfail->add_option("--kind", dfail.kind, "spill | rp");

    struct {
        std::string profile, kind = "rp";
        std::size_t n = 0, k = 1;
        std::uint32_t n_o = 0;
        double alpha = 0.1;
    } tfail;
    CLI::App* cmd_tfail = cmd_bounds->add_subcommand("tree-failure");
    cmd_tfail->add_option("--profile", tfail.profile, "profile JSON from `phi --json-out`")
        ->required();
    cmd_tfail->add_option("--kind", tfail.kind, "rp | spill | virtual-spill");
    cmd_tfail->add_option("--n", tfail.n)->required();
    cmd_tfail->add_option("--n-o", tfail.n_o)->required();
    cmd_tfail->add_option("--alpha", tfail.alpha);
    cmd_tfail->add_option("--k", tfail.k);

    try {
        app.parse(argc, argv);

        if (cmd_gen->parsed()) return run_gen(gen);

        if (cmd_build->parsed()) {
            const rpt::Dataset data = load_data(build.data, build.format);
            const rpt::TreeKind kind = rpt::tree_kind_from_name(build.kind);
            rpt::PartitionTree tree;
            switch (kind) {
                case rpt::TreeKind::rp:
                    tree = rpt::build_rp_tree(data, build.n_o, build.seed);
                    break;
                case rpt::TreeKind::spill:
                    tree = rpt::build_spill_tree(data, build.n_o, build.alpha, build.seed);
                    break;
                case rpt::TreeKind::virtual_spill:
                    tree = rpt::build_virtual_spill_tree(data, build.n_o, build.alpha,
                                                         build.seed);
                    break;
            }
            rpt::save_tree(tree, build.out);
            const rpt::TreeStats stats = rpt::tree_stats(tree);
            std::cout << "wrote " << build.out << " depth=" << stats.depth
                      << " leaves=" << stats.leaf_count
                      << " stored=" << stats.stored_indices
                      << " max_leaf=" << stats.max_leaf_size << "\n";
            return 0;
        }

        if (cmd_query->parsed()) {
            const rpt::Dataset data = load_data(q.data, q.format);
            const rpt::Dataset queries = load_data(q.queries, q.format);
            const rpt::PartitionTree tree = rpt::load_tree(q.tree);
            std::ostringstream out;
            out.precision(17);
            out << "# query_index neighbor_index distance leaves_visited points_scanned "
                   "short_count\n";
            for (std::size_t i = 0; i < queries.size(); ++i) {
                const rpt::QueryResult res = rpt::query(tree, data, queries.point(i), q.k);
                for (std::size_t j = 0; j < res.indices.size(); ++j)
                    out << i << " " << res.indices[j] << " " << res.distances[j] << " "
                        << res.leaves_visited << " " << res.points_scanned << " "
                        << (res.short_count ? 1 : 0) << "\n";
            }
            write_text(q.out, out.str());
            return 0;
        }

        if (cmd_phi->parsed()) {
            const rpt::Dataset data = load_data(phi_opt.data, phi_opt.format);
            const rpt::Dataset queries = load_data(phi_opt.queries, phi_opt.format);
            std::ostringstream out;
            out.precision(17);
            out << "# query_index m phi\n";
            json profiles = json::array();
            for (std::size_t i = 0; i < queries.size(); ++i) {
                const rpt::NeighborOrdering ordering =
                    rpt::neighbor_ordering(data, queries.point(i));
                rpt::PotentialProfile profile;
                if (!phi_opt.m_grid.empty()) {
                    std::vector<std::size_t> grid;
                    std::stringstream ss(phi_opt.m_grid);
                    std::string tok;
                    while (std::getline(ss, tok, ','))
                        grid.push_back(static_cast<std::size_t>(std::stoull(tok)));
                    profile = rpt::potential_profile(ordering, std::move(grid), phi_opt.k);
                } else if (phi_opt.n_o > 0 && phi_opt.beta > 0.0) {
                    profile = rpt::profile_for_levels(ordering, phi_opt.n_o, phi_opt.beta,
                                                      phi_opt.k);
                } else {
                    throw rpt::validation_error(
                        "phi: give either --m-grid or both --n-o and --beta");
                }
                for (std::size_t g = 0; g < profile.m_grid.size(); ++g)
                    out << i << " " << profile.m_grid[g] << " " << profile.values[g] << "\n";
                profiles.push_back(json{{"query_index", i},
                                        {"k", profile.k},
                                        {"m_grid", profile.m_grid},
                                        {"values", profile.values}});
            }
            write_text(phi_opt.out, out.str());
            if (!phi_opt.json_out.empty()) write_text(phi_opt.json_out, profiles.dump(2) + "\n");
            return 0;
        }

        if (cmd_bench->parsed()) {
            rpt::ExperimentConfig config = rpt::load_config(bench.config);
            config.seed = *bench.seed;
            const rpt::FailureReport report = rpt::run_experiment(config);
            rpt::emit_report(report, bench.out);
            std::cout << rpt::report_text(report);
            return 0;
        }

        if (cmd_bounds->parsed()) {
            std::cout.precision(17);
            if (cmd_dphi->parsed()) {
                std::cout << rpt::doubling_phi_bound(dphi.m, dphi.d_o, dphi.delta, dphi.k)
                          << "\n";
            } else if (cmd_tphi->parsed()) {
                std::cout << rpt::topic_phi_bound(tphi.v, tphi.L, tphi.n, tphi.m, tphi.c_o)
                          << "\n";
            } else if (cmd_summ->parsed()) {
                std::cout << rpt::summation_lemma_bound(summ.A, summ.B, summ.d_o, summ.beta,
                                                        summ.n_o, summ.with_log)
                          << "\n";
            } else if (cmd_dfail->parsed()) {
                std::cout << rpt::doubling_failure_bound(
                                 dfail.k, dfail.d_o, dfail.alpha, dfail.n_o, dfail.delta,
                                 dfail.c_o, rpt::tree_kind_from_name(dfail.kind))
                          << "\n";
            } else if (cmd_tfail->parsed()) {
                std::ifstream in(tfail.profile);
                if (!in) throw rpt::io_error("cannot open: " + tfail.profile);
                json j;
                try {
                    in >> j;
                } catch (const json::exception& e) {
                    throw rpt::io_error(tfail.profile + ": " + std::string(e.what()));
                }
                const json& first = j.is_array() ? j.at(0) : j;
                rpt::PotentialProfile profile;
                profile.k = first.value("k", std::size_t{1});
                profile.m_grid = first.at("m_grid").get<std::vector<std::size_t>>();
                profile.values = first.at("values").get<std::vector<double>>();
                const rpt::TreeKind kind = rpt::tree_kind_from_name(tfail.kind);
                const rpt::BoundReport report =
                    kind == rpt::TreeKind::rp
                        ? rpt::rp_failure_bound(profile, tfail.n_o, tfail.n, tfail.k)
                        : rpt::spill_failure_bound(profile, tfail.alpha, tfail.n_o, tfail.n,
                                                   kind, tfail.k);
                std::cout << rpt::bound_report_text(report);
            }
            return 0;
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const rpt::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const rpt::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
