#ifndef ORAQ_CORESET_HPP
#define ORAQ_CORESET_HPP

#include <string>
#include <vector>

#include "oraq/core.hpp"

namespace oraq {

enum class PlanMode { exact, approx_s1, approx_m1 };

const char* to_string(PlanMode mode);
PlanMode plan_mode_from_string(const std::string& s);

// (sample size, sample count) with its origin and predicted expected cost.
struct SamplePlan {
    size_t s = 1;
    size_t m = 1;
    PlanMode provenance = PlanMode::exact;
    double predicted_eoc = 0.0;
};

// Probability that at least one of m uniform size-s samples intersects a
// core set of size c; 1 when s > n-c (every sample hits by pigeonhole).
double core_hit_prob(size_t n, size_t s, size_t m, size_t c);

// Expected number of distinct probed objects: n*(1-(1-s/n)^m).
double expected_oracle_calls(size_t n, size_t s, size_t m);

// Smallest m with core_hit_prob(n,s,m,c) >= 1-delta; at least 1.
size_t min_sample_count(size_t s, size_t n, size_t c, double delta);

// Exhaustive scan over s in [1, n-c+1] with m = min_sample_count(s);
// minimizes the expected oracle calls, smallest s on ties.
SamplePlan plan_exact(size_t n, size_t c, double delta);
SamplePlan plan_approx_s1(size_t n, size_t c, double delta);
SamplePlan plan_approx_m1(size_t n, size_t c, double delta);
SamplePlan make_plan(size_t n, size_t c, double delta, PlanMode mode);

// (n - eoc(plan)) / (n - eoc(optimal)); +inf when the optimal plan saves
// nothing.
double savings_ratio(size_t n, const SamplePlan& plan, const SamplePlan& optimal);

// Smallest sample size n with exp(-2*n*epsilon^2) <= delta.
size_t hoeffding_sample_size(double delta, double epsilon);

// Probabilistic core-size lower bound floor(n*(mu_hat - epsilon_r)*(1-gamma))+1
// for recall targets, clamped to at least 1 when the estimate is too small.
size_t core_size_lower_bound(size_t n, double mu_hat, double epsilon_r, double gamma);

// Draws hoeffding_sample_size(delta, epsilon) ids from the pool uniformly
// with replacement and returns the fraction within the radius. The ledger is
// charged once per distinct id. Pr[estimate - epsilon <= true mean] >= 1-delta.
double hoeffding_estimate(const std::vector<ObjectId>& pool, double delta, double epsilon, double radius,
                          const OracleFn& oracle, OracleLedger& ledger, uint64_t seed);

/**
 * Sample-and-probe answer for a known core-set size c: draws the planned
 * samples, probes the distinct union and returns the proxy prefix up to the
 * largest (RT) or smallest (PT) probed neighbor index. When no neighbor is
 * sampled the fallback is the full dataset for RT (trivially valid) and the
 * empty set for PT (vacuously valid).
 */
Answer csc(const Dataset& ds, const Query& q, size_t c, double delta, PlanMode mode, const OracleFn& oracle,
           OracleLedger& ledger, uint64_t seed);
Answer csc_with_plan(const Dataset& ds, const Query& q, const SamplePlan& plan, const OracleFn& oracle,
                     OracleLedger& ledger, uint64_t seed);

/**
 * RT answer with unknown core-set size: lower-bounds the neighbor fraction
 * via a Hoeffding estimate at failure rate delta_r, converts it into a
 * core-size lower bound, and runs csc at the residual failure rate
 * (q.delta - delta_r) / (1 - delta_r). Requires delta_r < q.delta.
 */
Answer cse_rt(const Dataset& ds, const Query& q, double delta_r, double epsilon_r, PlanMode mode,
              const OracleFn& oracle, OracleLedger& ledger, uint64_t seed);

/**
 * PT answer with unknown core-set size: estimates the core size from a probed
 * sample of b_prime objects, combines the csc prefix with the largest probed
 * prefix of sampled precision >= gamma, and certifies the candidate with a
 * Hoeffding lower bound. Falls back to the set of all probed neighbors when
 * certification fails.
 */
Answer cse_pt(const Dataset& ds, const Query& q, size_t b_prime, double epsilon_p, PlanMode mode,
              const OracleFn& oracle, OracleLedger& ledger, uint64_t seed);

}  // namespace oraq

#endif  // ORAQ_CORESET_HPP
