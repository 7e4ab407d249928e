#ifndef ORAQ_REFCHECK_HPP
#define ORAQ_REFCHECK_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "oraq/core.hpp"
#include "oraq/coreset.hpp"

// Independent reference oracles. Everything here recomputes its result from
// first principles (outcome enumeration, naive search) and deliberately
// shares no implementation with the modules it validates. Hard input-size
// caps keep every call under a second.
namespace oraq::refcheck {

// Exact count distribution by summing over all 2^n Bernoulli outcomes; n <= 20.
std::vector<double> brute_pns(const std::vector<double>& phis);

// Exact success probability of the subset given by `subset_mask` (bit i set
// means the object at rank i+1 is in S) for the query's main measure; n <= 16.
double brute_pos(const std::vector<double>& phis, uint32_t subset_mask, const Query& q);

// Exact expected precision/recall of the subset by outcome enumeration; n <= 16.
double brute_expected(const std::vector<double>& phis, uint32_t subset_mask, Measure which);

// The size-k subset maximizing (success probability, expected complementary
// rate) lexicographically, smallest mask on ties; n <= 12.
uint32_t brute_best_fixed_size(const std::vector<double>& phis, size_t k, const Query& q);

// Naive reference for the optimal sample plan: double loop over (s, m) up to
// the first feasible m per s; n <= 500.
SamplePlan brute_plan(size_t n, size_t c, double delta);

struct McResult {
    double rate = 0.0;
    double ci_low = 0.0;   // 99% Wilson interval
    double ci_high = 1.0;
    size_t trials = 0;
};

using ScenarioFn = std::function<Dataset(uint64_t trial_seed)>;
using StrategyFn = std::function<Answer(const Dataset& ds, const Query& q, uint64_t trial_seed)>;

// Empirical success probability of a strategy over independently generated
// trials, validated against each trial's ground truth; trials >= 100.
McResult monte_carlo_success(const StrategyFn& strategy, const ScenarioFn& scenario, const Query& q,
                             size_t trials, uint64_t seed);

}  // namespace oraq::refcheck

#endif  // ORAQ_REFCHECK_HPP
