#include "oraq/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oraq/rng.hpp"

namespace oraq {

namespace {

void check_core_args(size_t n, size_t c) {
    if (n == 0) throw std::invalid_argument("dataset must not be empty");
    if (c == 0) throw std::invalid_argument("core-set size must be at least 1");
    if (c > n) throw std::invalid_argument("core-set size exceeds dataset size");
}

void check_plan_args(size_t n, size_t c, double delta) {
    check_core_args(n, c);
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be strictly inside (0,1)");
}

// Probability that one size-s sample misses the core set entirely.
double miss_prob(size_t n, size_t s, size_t c) {
    if (s > n - c) return 0.0;
    double prod = 1.0;
    for (size_t i = 0; i < c; ++i)
        prod *= static_cast<double>(n - s - i) / static_cast<double>(n - i);
    return prod;
}

}  // namespace

const char* to_string(PlanMode mode) {
    switch (mode) {
        case PlanMode::exact: return "exact";
        case PlanMode::approx_s1: return "approx-s1";
        case PlanMode::approx_m1: return "approx-m1";
    }
    return "?";
}

PlanMode plan_mode_from_string(const std::string& s) {
    if (s == "exact") return PlanMode::exact;
    if (s == "s1" || s == "approx-s1") return PlanMode::approx_s1;
    if (s == "m1" || s == "approx-m1") return PlanMode::approx_m1;
    throw std::invalid_argument("unknown plan mode '" + s + "' (expected exact, s1 or m1)");
}

double core_hit_prob(size_t n, size_t s, size_t m, size_t c) {
    check_core_args(n, c);
    if (s == 0 || s > n) throw std::invalid_argument("sample size must be in [1, n]");
    if (m == 0) throw std::invalid_argument("sample count must be at least 1");
    return 1.0 - std::pow(miss_prob(n, s, c), static_cast<double>(m));
}

double expected_oracle_calls(size_t n, size_t s, size_t m) {
    return static_cast<double>(n) *
           (1.0 - std::pow(1.0 - static_cast<double>(s) / static_cast<double>(n), static_cast<double>(m)));
}

size_t min_sample_count(size_t s, size_t n, size_t c, double delta) {
    check_plan_args(n, c, delta);
    if (s == 0 || s > n) throw std::invalid_argument("sample size must be in [1, n]");
    if (s > n - c) return 1;  // pigeonhole: every sample hits
    const double p_miss = miss_prob(n, s, c);
    if (p_miss <= 0.0) return 1;
    // Candidate from the closed form, then settled against the defining
    // inequality so that float noise in the ceiling cannot flip it.
    double est = std::log(delta) / std::log(p_miss);
    size_t m = est <= 1.0 ? 1 : static_cast<size_t>(std::ceil(est));
    auto feasible = [&](size_t mm) { return std::pow(p_miss, static_cast<double>(mm)) <= delta; };
    while (!feasible(m)) ++m;
    while (m > 1 && feasible(m - 1)) --m;
    return m;
}

SamplePlan plan_exact(size_t n, size_t c, double delta) {
    check_plan_args(n, c, delta);
    SamplePlan best;
    best.provenance = PlanMode::exact;
    best.predicted_eoc = std::numeric_limits<double>::infinity();
    for (size_t s = 1; s <= n - c + 1; ++s) {
        const size_t m = min_sample_count(s, n, c, delta);
        const double eoc = expected_oracle_calls(n, s, m);
        if (eoc < best.predicted_eoc) {
            best.s = s;
            best.m = m;
            best.predicted_eoc = eoc;
        }
    }
    return best;
}

SamplePlan plan_approx_s1(size_t n, size_t c, double delta) {
    check_plan_args(n, c, delta);
    SamplePlan plan;
    plan.s = 1;
    plan.m = min_sample_count(1, n, c, delta);
    plan.provenance = PlanMode::approx_s1;
    plan.predicted_eoc = expected_oracle_calls(n, plan.s, plan.m);
    return plan;
}

SamplePlan plan_approx_m1(size_t n, size_t c, double delta) {
    check_plan_args(n, c, delta);
    double denom = 0.0;
    for (size_t i = 0; i < c; ++i) denom += 1.0 / static_cast<double>(n - i);
    const double s_raw = std::ceil(-std::log(delta) / denom);
    SamplePlan plan;
    plan.s = static_cast<size_t>(std::min(static_cast<double>(n), std::max(1.0, s_raw)));
    plan.m = 1;
    plan.provenance = PlanMode::approx_m1;
    plan.predicted_eoc = expected_oracle_calls(n, plan.s, plan.m);
    return plan;
}

SamplePlan make_plan(size_t n, size_t c, double delta, PlanMode mode) {
    switch (mode) {
        case PlanMode::exact: return plan_exact(n, c, delta);
        case PlanMode::approx_s1: return plan_approx_s1(n, c, delta);
        case PlanMode::approx_m1: return plan_approx_m1(n, c, delta);
    }
    throw std::logic_error("unreachable plan mode");
}

double savings_ratio(size_t n, const SamplePlan& plan, const SamplePlan& optimal) {
    const double saved_opt = static_cast<double>(n) - optimal.predicted_eoc;
    if (saved_opt <= 0.0) return std::numeric_limits<double>::infinity();
    return (static_cast<double>(n) - plan.predicted_eoc) / saved_opt;
}

size_t hoeffding_sample_size(double delta, double epsilon) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be strictly inside (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be strictly inside (0,1)");
    return static_cast<size_t>(std::ceil(std::log(delta) / (-2.0 * epsilon * epsilon)));
}

double hoeffding_estimate(const std::vector<ObjectId>& pool, double delta, double epsilon, double radius,
                          const OracleFn& oracle, OracleLedger& ledger, uint64_t seed) {
    if (pool.empty()) throw std::invalid_argument("hoeffding estimate over an empty pool");
    const size_t draws = hoeffding_sample_size(delta, epsilon);
    Rng rng(seed);
    ProbeCache cache(oracle, ledger);
    size_t hits = 0;
    for (size_t i = 0; i < draws; ++i) {
        const ObjectId id = pool[rng.below(pool.size())];
        if (cache.dist(id) <= radius) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(draws);
}

Answer csc_with_plan(const Dataset& ds, const Query& q, const SamplePlan& plan, const OracleFn& oracle,
                     OracleLedger& ledger, uint64_t seed) {
    q.validate();
    const size_t n = ds.size();
    if (plan.s == 0 || plan.s > n || plan.m == 0) throw std::invalid_argument("infeasible sample plan");
    Rng rng(seed);
    DistinctSampler sampler(n);
    ProbeCache cache(oracle, ledger);
    std::vector<uint32_t> picks;
    picks.reserve(plan.s);
    const bool rt = q.kind == QueryKind::recall_target;
    bool any_neighbor = false;
    size_t k_union = 0;
    for (size_t i = 0; i < plan.m; ++i) {
        picks.clear();
        sampler.draw(plan.s, rng, picks);  // without replacement within a sample
        for (uint32_t pos : picks) {
            const size_t rank = pos + 1;
            if (cache.dist(ds.at_rank(rank).id) > q.radius) continue;
            if (!any_neighbor)
                k_union = rank;
            else
                k_union = rt ? std::max(k_union, rank) : std::min(k_union, rank);
            any_neighbor = true;
        }
    }
    const size_t k = any_neighbor ? k_union : (rt ? n : 0);
    Answer a = prefix_answer(ds, k, cache.calls(), std::string("csc-") + to_string(plan.provenance));
    return a;
}

Answer csc(const Dataset& ds, const Query& q, size_t c, double delta, PlanMode mode, const OracleFn& oracle,
           OracleLedger& ledger, uint64_t seed) {
    if (c > ds.size()) throw std::invalid_argument("core-set size exceeds dataset size");
    const SamplePlan plan = make_plan(ds.size(), c, delta, mode);
    return csc_with_plan(ds, q, plan, oracle, ledger, seed);
}

size_t core_size_lower_bound(size_t n, double mu_hat, double epsilon_r, double gamma) {
    const double raw = detail::floor_snap(static_cast<double>(n) * (mu_hat - epsilon_r) * (1.0 - gamma)) + 1.0;
    return raw < 1.0 ? 1 : static_cast<size_t>(raw);  // clamp when mu_hat <= epsilon_r
}

Answer cse_rt(const Dataset& ds, const Query& q, double delta_r, double epsilon_r, PlanMode mode,
              const OracleFn& oracle, OracleLedger& ledger, uint64_t seed) {
    q.validate();
    if (q.kind != QueryKind::recall_target) throw std::invalid_argument("cse_rt requires a recall-target query");
    if (!(delta_r > 0.0 && delta_r < q.delta))
        throw std::invalid_argument("delta_r must be positive and below the query failure rate");
    const size_t n = ds.size();
    if (n == 0) return prefix_answer(ds, 0, 0, "cse-rt");

    ProbeCache cache(oracle, ledger);
    OracleFn shared = [&cache](ObjectId id) { return cache.dist(id); };

    const double mu_hat =
        hoeffding_estimate(prefix(ds, n), delta_r, epsilon_r, q.radius, shared, ledger, derive_seed(seed, 0));
    const size_t c_lower = core_size_lower_bound(n, mu_hat, epsilon_r, q.gamma);

    const double delta_eff = (q.delta - delta_r) / (1.0 - delta_r);
    Answer a = csc(ds, q, c_lower, delta_eff, mode, shared, ledger, derive_seed(seed, 1));
    a.algorithm = "cse-rt";
    a.oracle_calls = cache.calls();
    return a;
}

Answer cse_pt(const Dataset& ds, const Query& q, size_t b_prime, double epsilon_p, PlanMode mode,
              const OracleFn& oracle, OracleLedger& ledger, uint64_t seed) {
    q.validate();
    if (q.kind != QueryKind::precision_target) throw std::invalid_argument("cse_pt requires a precision-target query");
    const size_t n = ds.size();
    if (b_prime == 0 || b_prime > n) throw std::out_of_range("probe budget must be in [1, |D|]");
    if (!(epsilon_p > 0.0 && epsilon_p < 1.0)) throw std::invalid_argument("epsilon_p must be strictly inside (0,1)");

    ProbeCache cache(oracle, ledger);
    OracleFn shared = [&cache](ObjectId id) { return cache.dist(id); };

    auto probed_neighbor_answer = [&]() {
        Answer a;
        for (const auto& [id, d] : cache.seen())
            if (d <= q.radius) a.member_ids.push_back(id);
        std::sort(a.member_ids.begin(), a.member_ids.end());
        a.oracle_calls = cache.calls();
        a.algorithm = "cse-pt";
        return a;
    };

    // Probe b' distinct objects and estimate the core size from the probed
    // subsequence, scaled up to the dataset.
    Rng rng(derive_seed(seed, 0));
    DistinctSampler sampler(n);
    std::vector<uint32_t> picks;
    picks.reserve(b_prime);
    sampler.draw(b_prime, rng, picks);
    std::vector<ObjectRecord> sub_records;
    sub_records.reserve(b_prime);
    IdSet sub_neighbors;
    for (uint32_t pos : picks) {
        const auto& rec = ds.at_rank(pos + 1);
        sub_records.push_back({rec.id, rec.proxy_dist, std::nullopt});
        if (cache.dist(rec.id) <= q.radius) sub_neighbors.insert(rec.id);
    }
    const Dataset sub_ds = build_index(std::move(sub_records));
    const CoreSet sub_core = core_set(sub_ds, q, sub_neighbors);

    const double c_hat = static_cast<double>(n) / static_cast<double>(b_prime) * static_cast<double>(sub_core.size);
    const size_t c_est = std::max<size_t>(1, static_cast<size_t>(std::floor(c_hat + 0.5)));

    const Answer a1 = csc(ds, q, c_est, q.delta, mode, shared, ledger, derive_seed(seed, 1));
    const size_t k1 = a1.prefix_k.value();

    // Largest probed neighbor index whose probed prefix still has sampled
    // precision >= gamma, over everything probed so far.
    std::vector<ObjectRecord> probed_records;
    IdSet probed_neighbors;
    for (const auto& [id, d] : cache.seen()) {
        probed_records.push_back({id, ds.at_rank(ds.rank_of(id)).proxy_dist, std::nullopt});
        if (d <= q.radius) probed_neighbors.insert(id);
    }
    const Dataset probed_ds = build_index(std::move(probed_records));
    const CoreSet probed_core = core_set(probed_ds, q, probed_neighbors);
    size_t k2 = 0;
    for (ObjectId id : probed_core.members) k2 = std::max(k2, ds.rank_of(id));
    const size_t k_hat = std::max(k1, k2);
    if (k_hat == 0) return probed_neighbor_answer();

    const double mu_lower =
        hoeffding_estimate(prefix(ds, k_hat), q.delta, epsilon_p, q.radius, shared, ledger, derive_seed(seed, 2)) -
        epsilon_p;
    if (mu_lower >= q.gamma) {
        Answer a = prefix_answer(ds, k_hat, cache.calls(), "cse-pt");
        return a;
    }
    return probed_neighbor_answer();
}

}  // namespace oraq
