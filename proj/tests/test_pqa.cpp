#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "oraq/pbd.hpp"
#include "oraq/pqa.hpp"
#include "oraq/refcheck.hpp"
#include "oraq/rng.hpp"

using namespace oraq;
using pbd::MembershipProbs;

namespace {

// Dataset whose rank order matches the index of a phi vector.
Dataset spaced(size_t n) {
    std::vector<ObjectRecord> recs;
    for (size_t i = 0; i < n; ++i)
        recs.push_back({i, static_cast<double>(i + 1) / static_cast<double>(n + 1), {}});
    return build_index(std::move(recs));
}

MembershipProbs descending_phis(Rng& rng, size_t n) {
    MembershipProbs phis(n);
    for (auto& p : phis) p = rng.next_double();
    std::sort(phis.begin(), phis.end(), std::greater<double>());
    return phis;
}

size_t linear_scan_k_lower(const Dataset& ds, const MembershipProbs& phis, double gamma, double delta) {
    for (size_t k = 0; k <= phis.size(); ++k) {
        MembershipProbs inside(phis.begin(), phis.begin() + static_cast<long>(k));
        MembershipProbs outside(phis.begin() + static_cast<long>(k), phis.end());
        if (pbd::success_prob_recall(pbd::count_distribution(inside), pbd::count_distribution(outside), gamma) >=
            1.0 - delta)
            return k;
    }
    return ds.size();
}

}  // namespace

TEST_CASE("pqa_pt keeps the largest feasible prefix") {
    const Dataset ds = spaced(3);
    const Answer a = pqa_pt(ds, {1.0, 1.0, 0.0}, 0.9, 0.1);
    CHECK(a.prefix_k == 2);
    CHECK(a.oracle_calls == 0);
    CHECK(a.algorithm == "pqa-pt");
}

TEST_CASE("pqa_pt returns everything when membership is certain") {
    const Dataset ds = spaced(5);
    const Answer a = pqa_pt(ds, MembershipProbs(5, 1.0), 0.9, 0.1);
    CHECK(a.prefix_k == 5);
    CHECK(a.member_ids.size() == 5);
}

TEST_CASE("pqa_pt returns the empty answer when nothing can be a neighbor") {
    const Dataset ds = spaced(4);
    const Answer a = pqa_pt(ds, MembershipProbs(4, 0.0), 0.9, 0.1);
    CHECK(a.prefix_k == 0);
    CHECK(a.member_ids.empty());
}

TEST_CASE("pqa_rt extends the smallest feasible prefix to maximal expected precision") {
    const Dataset ds = spaced(3);
    const Answer a = pqa_rt(ds, {1.0, 1.0, 0.0}, 0.9, 0.1);
    CHECK(a.prefix_k == 2);  // E[Mp(D2)] = 1 beats E[Mp(D3)] = 2/3
    CHECK(a.oracle_calls == 0);
    CHECK(a.algorithm == "pqa-rt");
}

TEST_CASE("pqa_rt with certain membership stops at the recall threshold") {
    Rng rng(31);
    for (size_t n : {4, 7, 10, 13}) {
        const Dataset ds = spaced(n);
        const double gamma = 0.55 + 0.4 * rng.next_double();
        const Answer a = pqa_rt(ds, MembershipProbs(n, 1.0), gamma, 0.1);
        const size_t expected = detail::min_hits_for(n, gamma);
        CHECK(a.prefix_k == expected);
    }
}

TEST_CASE("pqa_rt on a single certain object returns it") {
    const Dataset ds = spaced(1);
    const Answer a = pqa_rt(ds, {1.0}, 0.9, 0.1);
    CHECK(a.prefix_k == 1);
}

TEST_CASE("pqa_rt returns the empty prefix when no neighbors likely exist") {
    // Pr[no neighbors] = 0.99^5 ~ 0.951, above 1-delta; recall is then
    // vacuously 1 and the empty set has expected precision 1.
    const Dataset ds = spaced(5);
    const Answer a = pqa_rt(ds, MembershipProbs(5, 0.01), 0.9, 0.1);
    CHECK(a.prefix_k == 0);
    CHECK(a.member_ids.empty());
}

TEST_CASE("pqa_rt binary search equals a linear scan on random instances") {
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 1 + rng.below(14);
        const Dataset ds = spaced(n);
        const auto phis = descending_phis(rng, n);
        const double gamma = 0.5 + 0.45 * rng.next_double();
        const double delta = 0.05 + 0.3 * rng.next_double();
        const size_t k_scan = linear_scan_k_lower(ds, phis, gamma, delta);
        CHECK(pqa_rt_lower_prefix(phis, gamma, delta) == k_scan);
        const Answer a = pqa_rt(ds, phis, gamma, delta);
        // the returned prefix is at least the smallest feasible one
        CHECK(*a.prefix_k >= k_scan);
        // and the smallest feasible prefix really is feasible per the oracle
        Query q;
        q.kind = QueryKind::recall_target;
        q.gamma = gamma;
        q.delta = delta;
        const uint32_t mask = static_cast<uint32_t>((size_t{1} << k_scan) - 1);
        CHECK(refcheck::brute_pos(phis, mask, q) >= 1.0 - delta - 1e-9);
    }
}

TEST_CASE("pqa answers are optimal against exhaustive subset search") {
    Rng rng(33);
    for (int trial = 0; trial < 60; ++trial) {
        const size_t n = 2 + rng.below(7);  // up to 8 objects
        const Dataset ds = spaced(n);
        const auto phis = descending_phis(rng, n);
        Query q;
        q.gamma = 0.55 + 0.4 * rng.next_double();
        q.delta = 0.05 + 0.25 * rng.next_double();
        for (QueryKind kind : {QueryKind::precision_target, QueryKind::recall_target}) {
            q.kind = kind;
            const Answer a = pqa(ds, q, phis);
            const Measure cr = complementary_measure(kind);
            uint32_t answer_mask = 0;
            for (size_t r = 1; r <= *a.prefix_k; ++r) answer_mask |= 1u << (r - 1);
            const double a_pos = refcheck::brute_pos(phis, answer_mask, q);
            const double a_ecr = refcheck::brute_expected(phis, answer_mask, cr);
            CHECK(a_pos >= 1.0 - q.delta - 1e-9);
            double best_ecr = -1.0;
            for (uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (refcheck::brute_pos(phis, mask, q) < 1.0 - q.delta) continue;
                best_ecr = std::max(best_ecr, refcheck::brute_expected(phis, mask, cr));
            }
            CHECK(a_ecr >= best_ecr - 1e-9);
        }
    }
}

TEST_CASE("pqa never touches an oracle ledger") {
    const Dataset ds = spaced(6);
    OracleLedger ledger;
    Rng rng(34);
    MembershipProbs phis = descending_phis(rng, 6);
    (void)pqa_pt(ds, phis, 0.9, 0.1);
    (void)pqa_rt(ds, phis, 0.9, 0.1);
    CHECK(ledger.count() == 0);
}

TEST_CASE("pqa validates its arguments") {
    const Dataset ds = spaced(3);
    CHECK_THROWS_AS(pqa_pt(ds, {0.5}, 0.9, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(pqa_pt(ds, {0.5, 0.5, 0.5}, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(pqa_rt(ds, {0.5, 0.5, 0.5}, 0.9, 0.0), std::invalid_argument);
}
