#ifndef ORAQ_HARNESS_HPP
#define ORAQ_HARNESS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oraq/core.hpp"
#include "oraq/coreset.hpp"

namespace oraq::harness {

/**
 * Synthetic data law: proxy distances uniform on [0,1] (or copied from a
 * dataset file), oracle distances clip(proxy + N(0, noise_sigma)) truncated
 * into [0,1]. Generation is deterministic per seed.
 */
struct Scenario {
    size_t n = 2000;
    double noise_sigma = 0.1;
    double radius = 0.9;
    uint64_t seed = 0;
    std::string proxy_file;  // empty: uniform proxies
};

Dataset generate(const Scenario& sc);
void synth_generate(const Scenario& sc, const std::string& out_path);

// One evaluated run. Validity and quality are filled only when the dataset
// carries ground-truth oracle distances.
struct TrialRecord {
    size_t trial = 0;
    uint64_t scenario_seed = 0;
    std::string algorithm;
    std::string variant;  // experiment-specific label, e.g. mode or perturbation
    double perturb = 0.0;
    std::optional<size_t> prefix_k;
    size_t answer_size = 0;
    size_t oracle_calls = 0;
    std::optional<bool> valid;
    std::optional<double> precision;
    std::optional<double> recall;
};

TrialRecord evaluate(const Dataset& ds, const Query& q, const Answer& ans, size_t trial, uint64_t scenario_seed);

std::string to_ndjson_line(const TrialRecord& rec);
TrialRecord record_from_json_line(const std::string& line);
std::vector<TrialRecord> read_records(const std::string& path);

struct PerturbPoint {
    double perturb = 0.0;
    size_t trials = 0;
    double success_rate = 0.0;
    double mean_cr = 0.0;
};

// Desk-scale replication of the perturbed-prefix study: run pqa per trial,
// then return the prefix of length (1+perturb)*k_star for each grid point.
std::vector<PerturbPoint> experiment_pqa_perturb(const Scenario& base, const Query& q,
                                                 const std::vector<double>& grid, size_t trials,
                                                 std::vector<TrialRecord>* records);

struct CscPoint {
    std::string mode;
    size_t trials = 0;
    double success_rate = 0.0;
    double mean_oracle_calls = 0.0;
    double mean_cr = 0.0;
    double plan_seconds = 0.0;  // diagnostics only; not part of any report
};

// Modes: exact, s1, m1 plus the baselines rand-s (random s, m from the
// constraint) and rand-sm (both random). Ground-truth core size per trial;
// PT trials are drawn until the core set is closed.
std::vector<CscPoint> experiment_csc(const Scenario& base, const Query& q, const std::vector<std::string>& modes,
                                     size_t trials, std::vector<TrialRecord>* records);

struct CseParams {
    PlanMode mode = PlanMode::approx_m1;
    double delta_r = 0.05;
    double epsilon_r = 0.1;
    size_t b_prime = 100;
    double epsilon_p = 0.001;
};

CscPoint experiment_cse(const Scenario& base, const Query& q, const CseParams& params, size_t trials,
                        std::vector<TrialRecord>* records);

// Aggregates grouped by (algorithm, variant). success_rate_by_scenario is
// the mean of per-scenario success rates; it equals success_rate when every
// scenario has a single record.
struct AggregateRow {
    std::string algorithm;
    std::string variant;
    size_t trials = 0;
    double success_rate = 0.0;
    double success_rate_by_scenario = 0.0;
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    double mean_oracle_calls = 0.0;
    double mean_answer_size = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records);
std::string render_csv(const std::vector<AggregateRow>& rows);
std::string render_json(const std::vector<AggregateRow>& rows);

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> parse_config(const std::string& path);

}  // namespace oraq::harness

#endif  // ORAQ_HARNESS_HPP
