#include "oraq/pqa.hpp"

#include <stdexcept>

namespace oraq {

namespace {

void check_args(const Dataset& ds, const pbd::MembershipProbs& phis, double gamma, double delta) {
    if (phis.size() != ds.size()) throw std::invalid_argument("membership probabilities do not match dataset size");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be strictly inside (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be strictly inside (0,1)");
}

}  // namespace

Answer pqa_pt(const Dataset& ds, const pbd::MembershipProbs& phis, double gamma, double delta) {
    check_args(ds, phis, gamma, delta);
    const size_t n = ds.size();
    pbd::ProbMass p{1.0};
    p.reserve(n + 1);
    size_t k_star = 0;  // the empty prefix is vacuously precise
    for (size_t k = 1; k <= n; ++k) {
        pbd::convolve_bernoulli_inplace(p, phis[k - 1]);
        if (pbd::success_prob_precision(p, gamma) >= 1.0 - delta) k_star = k;
    }
    return prefix_answer(ds, k_star, 0, "pqa-pt");
}

size_t pqa_rt_lower_prefix(const pbd::MembershipProbs& phis, double gamma, double delta) {
    auto feasible = [&](size_t k) {
        pbd::MembershipProbs inside(phis.begin(), phis.begin() + static_cast<long>(k));
        pbd::MembershipProbs outside(phis.begin() + static_cast<long>(k), phis.end());
        const auto p_in = pbd::count_distribution(inside);
        const auto p_out = pbd::count_distribution(outside);
        return pbd::success_prob_recall(p_in, p_out, gamma) >= 1.0 - delta;
    };
    // Success probability of prefixes is non-decreasing in k for recall, so
    // binary search finds the smallest feasible one; k = n is always feasible.
    size_t lo = 0, hi = phis.size();
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

Answer pqa_rt(const Dataset& ds, const pbd::MembershipProbs& phis, double gamma, double delta) {
    check_args(ds, phis, gamma, delta);
    const size_t n = ds.size();
    if (n == 0) return prefix_answer(ds, 0, 0, "pqa-rt");

    const size_t k_lower = pqa_rt_lower_prefix(phis, gamma, delta);
    if (k_lower == 0) return prefix_answer(ds, 0, 0, "pqa-rt");  // empty set: expected precision 1

    pbd::MembershipProbs inside(phis.begin(), phis.begin() + static_cast<long>(k_lower));
    pbd::ProbMass p = pbd::count_distribution(inside);
    p.reserve(n + 1);
    double best = pbd::expected_precision(p, k_lower);
    size_t k_star = k_lower;
    for (size_t k = k_lower + 1; k <= n; ++k) {
        pbd::convolve_bernoulli_inplace(p, phis[k - 1]);
        const double e = pbd::expected_precision(p, k);
        if (e > best) {
            best = e;
            k_star = k;
        }
    }
    return prefix_answer(ds, k_star, 0, "pqa-rt");
}

Answer pqa(const Dataset& ds, const Query& q, const pbd::MembershipProbs& phis) {
    q.validate();
    return q.kind == QueryKind::precision_target ? pqa_pt(ds, phis, q.gamma, q.delta)
                                                 : pqa_rt(ds, phis, q.gamma, q.delta);
}

}  // namespace oraq
