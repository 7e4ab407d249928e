#include "oraq/refcheck.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "oraq/rng.hpp"

namespace oraq::refcheck {

namespace {

// Local copies of the threshold rules (1e-12 snap onto integers) so that the
// reference path decides boundary cases exactly like the implementation
// without sharing its code.
bool ref_near_int(double x, double r) { return std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x)); }

size_t ref_min_hits(size_t total, double gamma) {
    const double t = static_cast<double>(total) * gamma;
    const double r = std::nearbyint(t);
    const double v = ref_near_int(t, r) ? r : std::ceil(t);
    return v <= 0.0 ? 0 : static_cast<size_t>(v);
}

size_t ref_max_outside(size_t inside, double gamma) {
    const double t = static_cast<double>(inside) * (1.0 - gamma) / gamma;
    const double r = std::nearbyint(t);
    const double v = ref_near_int(t, r) ? r : std::floor(t);
    return v <= 0.0 ? 0 : static_cast<size_t>(v);
}

std::vector<double> outcome_probs(const std::vector<double>& phis) {
    const size_t n = phis.size();
    std::vector<double> probs(size_t{1} << n, 1.0);
    for (uint32_t mask = 0; mask < probs.size(); ++mask)
        for (size_t i = 0; i < n; ++i) probs[mask] *= (mask >> i) & 1u ? phis[i] : 1.0 - phis[i];
    return probs;
}

}  // namespace

std::vector<double> brute_pns(const std::vector<double>& phis) {
    if (phis.size() > 20) throw std::invalid_argument("brute_pns capped at 20 objects");
    const size_t n = phis.size();
    std::vector<double> mass(n + 1, 0.0);
    for (uint32_t mask = 0; mask < (size_t{1} << n); ++mask) {
        double p = 1.0;
        for (size_t i = 0; i < n; ++i) p *= (mask >> i) & 1u ? phis[i] : 1.0 - phis[i];
        mass[std::popcount(mask)] += p;
    }
    return mass;
}

double brute_pos(const std::vector<double>& phis, uint32_t subset_mask, const Query& q) {
    if (phis.size() > 16) throw std::invalid_argument("brute_pos capped at 16 objects");
    q.validate();
    const size_t n = phis.size();
    const uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;
    const uint32_t outside_mask = full & ~subset_mask;
    const auto probs = outcome_probs(phis);
    const size_t set_size = std::popcount(subset_mask);
    double success = 0.0;
    if (q.kind == QueryKind::precision_target) {
        const size_t threshold = ref_min_hits(set_size, q.gamma);  // empty set: 0, vacuously precise
        for (uint32_t w = 0; w < probs.size(); ++w)
            if (static_cast<size_t>(std::popcount(w & subset_mask)) >= threshold) success += probs[w];
    } else {
        for (uint32_t w = 0; w < probs.size(); ++w) {
            const size_t inside = std::popcount(w & subset_mask);
            const size_t outside = std::popcount(w & outside_mask);
            if (outside <= ref_max_outside(inside, q.gamma)) success += probs[w];
        }
    }
    return success;
}

double brute_expected(const std::vector<double>& phis, uint32_t subset_mask, Measure which) {
    if (phis.size() > 16) throw std::invalid_argument("brute_expected capped at 16 objects");
    const size_t n = phis.size();
    const uint32_t full = n == 32 ? ~0u : (1u << n) - 1u;
    const uint32_t outside_mask = full & ~subset_mask;
    const auto probs = outcome_probs(phis);
    const size_t set_size = std::popcount(subset_mask);
    double total = 0.0;
    for (uint32_t w = 0; w < probs.size(); ++w) {
        const size_t inside = std::popcount(w & subset_mask);
        double value;
        if (which == Measure::precision) {
            value = set_size == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(set_size);
        } else {
            const size_t nn = inside + static_cast<size_t>(std::popcount(w & outside_mask));
            value = nn == 0 ? 1.0 : static_cast<double>(inside) / static_cast<double>(nn);
        }
        total += probs[w] * value;
    }
    return total;
}

uint32_t brute_best_fixed_size(const std::vector<double>& phis, size_t k, const Query& q) {
    if (phis.size() > 12) throw std::invalid_argument("brute_best_fixed_size capped at 12 objects");
    if (k > phis.size()) throw std::out_of_range("subset size exceeds object count");
    const Measure cr = complementary_measure(q.kind);
    uint32_t best_mask = 0;
    double best_pos = -1.0, best_ecr = -1.0;
    const uint32_t limit = 1u << phis.size();
    for (uint32_t mask = 0; mask < limit; ++mask) {
        if (static_cast<size_t>(std::popcount(mask)) != k) continue;
        const double pos = brute_pos(phis, mask, q);
        const double ecr = brute_expected(phis, mask, cr);
        if (pos > best_pos || (pos == best_pos && ecr > best_ecr)) {
            best_mask = mask;
            best_pos = pos;
            best_ecr = ecr;
        }
    }
    return best_mask;
}

SamplePlan brute_plan(size_t n, size_t c, double delta) {
    if (n > 500) throw std::invalid_argument("brute_plan capped at n = 500");
    if (n == 0 || c == 0 || c > n) throw std::invalid_argument("need 1 <= c <= n");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be strictly inside (0,1)");
    SamplePlan best;
    best.provenance = PlanMode::exact;
    best.predicted_eoc = std::numeric_limits<double>::infinity();
    for (size_t s = 1; s <= n - c + 1; ++s) {
        double p_miss = 0.0;
        if (s <= n - c) {
            p_miss = 1.0;
            for (size_t i = 0; i < c; ++i)
                p_miss *= static_cast<double>(n - s - i) / static_cast<double>(n - i);
        }
        size_t m = 1;
        if (p_miss > 0.0) {
            double running = p_miss;
            while (running > delta) {
                ++m;
                running *= p_miss;
            }
            // settle on the power form used everywhere else
            while (std::pow(p_miss, static_cast<double>(m)) > delta) ++m;
            while (m > 1 && std::pow(p_miss, static_cast<double>(m - 1)) <= delta) --m;
        }
        const double eoc = static_cast<double>(n) *
                           (1.0 - std::pow(1.0 - static_cast<double>(s) / static_cast<double>(n),
                                           static_cast<double>(m)));
        if (eoc < best.predicted_eoc) {
            best.s = s;
            best.m = m;
            best.predicted_eoc = eoc;
        }
    }
    return best;
}

McResult monte_carlo_success(const StrategyFn& strategy, const ScenarioFn& scenario, const Query& q,
                             size_t trials, uint64_t seed) {
    if (trials < 100) throw std::invalid_argument("need at least 100 trials");
    size_t successes = 0;
    for (size_t t = 0; t < trials; ++t) {
        const Dataset ds = scenario(derive_seed(seed, 2 * t));
        const Answer ans = strategy(ds, q, derive_seed(seed, 2 * t + 1));
        const IdSet nn = ground_truth_neighbors(ds, q.radius);
        if (valid_answer(ans.member_set(), nn, q.kind, q.gamma)) ++successes;
    }
    McResult res;
    res.trials = trials;
    res.rate = static_cast<double>(successes) / static_cast<double>(trials);
    // 99% Wilson interval
    const double z = 2.5758293035489004;
    const double nt = static_cast<double>(trials);
    const double z2 = z * z;
    const double center = (res.rate + z2 / (2.0 * nt)) / (1.0 + z2 / nt);
    const double half =
        z * std::sqrt(res.rate * (1.0 - res.rate) / nt + z2 / (4.0 * nt * nt)) / (1.0 + z2 / nt);
    // the Wilson interval always contains the point estimate; keep that true
    // under rounding as well
    res.ci_low = std::min(std::max(0.0, center - half), res.rate);
    res.ci_high = std::max(std::min(1.0, center + half), res.rate);
    return res;
}

}  // namespace oraq::refcheck
