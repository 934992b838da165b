#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rpt/bounds.hpp"
#include "rpt/dataset.hpp"
#include "rpt/tree.hpp"

namespace rpt {

enum class GeneratorKind { doubling, topic, adversarial, external };

const char* generator_kind_name(GeneratorKind kind);
GeneratorKind generator_kind_from_name(const std::string& name);

// Everything one empirical failure-rate run needs. Parameters irrelevant to
// the chosen generator are ignored. All constraints are re-validated before
// any expensive work starts.
struct ExperimentConfig {
    GeneratorKind generator = GeneratorKind::doubling;
    TreeKind tree_kind = TreeKind::rp;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t intrinsic_dim = 2;  // doubling
    std::size_t vocab = 0;          // topic
    std::size_t topics = 1;         // topic
    double target_length = 16.0;    // topic
    double spike = 1e6;             // adversarial
    std::uint32_t n_o = 1;
    double alpha = 0.1;  // ignored for rp trees
    std::size_t k = 1;
    std::size_t trials = 1;   // independent tree builds
    std::size_t queries = 1;  // query points (1 for adversarial)
    double delta = 0.05;
    double c_o = 0.125;
    std::uint64_t seed = 0;
    std::string data_file;     // external generator
    std::string queries_file;  // external generator
};

void validate(const ExperimentConfig& config);

struct FailureReport {
    ExperimentConfig config;
    std::size_t failures = 0;
    std::size_t total = 0;  // trials * queries
    double empirical_rate = 0.0;
    double standard_error = 0.0;     // sqrt(p(1-p) / total)
    double theoretical_bound = 0.0;  // mean over queries of the per-query bound
    std::vector<std::size_t> level_m;
    std::vector<double> per_level_phi;  // mean over queries
    double mean_points_scanned = 0.0;
    double mean_leaves_visited = 0.0;
    std::vector<double> per_query_rate;
    std::vector<double> per_query_bound;
};

// Builds `trials` independent trees, answers `queries` k-NN queries against
// each, counts a failure whenever the returned index set differs from the
// brute-force set, and attaches the failure bound computed from each query's
// empirical potential profile.
FailureReport run_experiment(const ExperimentConfig& config);

std::string report_text(const FailureReport& report);

// Writes the human-readable table to `path` and the machine-readable JSON
// document to `path`.json.
void emit_report(const FailureReport& report, const std::string& path);

FailureReport load_report_json(const std::string& path);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace rpt
