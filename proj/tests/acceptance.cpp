// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Takes the CLI binary path as argv[1] (needed by the
// determinism criterion).

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oraq/coreset.hpp"
#include "oraq/harness.hpp"
#include "oraq/pbd.hpp"
#include "oraq/pqa.hpp"
#include "oraq/pqe.hpp"
#include "oraq/refcheck.hpp"
#include "oraq/rng.hpp"

using namespace oraq;

namespace {

std::string g_cli_path;

double wilson_halfwidth(double rate, size_t trials) {
    const double z = 2.5758293035489004;  // 99%
    const double n = static_cast<double>(trials);
    const double z2 = z * z;
    return z * std::sqrt(rate * (1.0 - rate) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
}

std::vector<double> random_phis(Rng& rng, size_t n) {
    std::vector<double> phis(n);
    for (auto& p : phis) p = rng.next_double();
    return phis;
}

// ---- criterion 1: direct convolution vs exhaustive enumeration ----------
bool criterion_convolution(std::string& detail) {
    Rng rng(derive_seed(0xACCE97, 1));
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const size_t n = rng.below(13);
        const auto phis = random_phis(rng, n);
        const auto fast = pbd::count_distribution(phis);
        const auto slow = refcheck::brute_pns(phis);
        if (fast.size() != slow.size()) return false;
        for (size_t k = 0; k < fast.size(); ++k) worst = std::max(worst, std::fabs(fast[k] - slow[k]));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max abs error %.2e", worst);
    detail = buf;
    return worst <= 1e-9;
}

// ---- criterion 2: success probabilities vs enumeration ------------------
bool criterion_pos(std::string& detail) {
    Rng rng(derive_seed(0xACCE97, 2));
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const size_t n = 1 + rng.below(12);
        const auto phis = random_phis(rng, n);
        const uint32_t mask = static_cast<uint32_t>(rng.below(size_t{1} << n));
        pbd::MembershipProbs inside, outside;
        for (size_t i = 0; i < n; ++i) ((mask >> i) & 1u ? inside : outside).push_back(phis[i]);
        const auto p_in = pbd::count_distribution(inside);
        const auto p_out = pbd::count_distribution(outside);
        Query q;
        q.gamma = 0.05 + 0.9 * rng.next_double();
        q.kind = QueryKind::precision_target;
        worst = std::max(worst,
                         std::fabs(pbd::success_prob_precision(p_in, q.gamma) - refcheck::brute_pos(phis, mask, q)));
        q.kind = QueryKind::recall_target;
        worst = std::max(
            worst, std::fabs(pbd::success_prob_recall(p_in, p_out, q.gamma) - refcheck::brute_pos(phis, mask, q)));
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max abs error %.2e", worst);
    detail = buf;
    return worst <= 1e-9;
}

// ---- criterion 3: prefixes dominate equal-size subsets ------------------
bool criterion_fixed_size(std::string& detail) {
    Rng rng(derive_seed(0xACCE97, 3));
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 2 + rng.below(9);
        auto phis = random_phis(rng, n);
        std::sort(phis.begin(), phis.end(), std::greater<double>());
        Query q;
        q.gamma = 0.5 + 0.45 * rng.next_double();
        q.kind = rng.next_double() < 0.5 ? QueryKind::precision_target : QueryKind::recall_target;
        const Measure cr = complementary_measure(q.kind);
        for (size_t k = 0; k <= n; ++k) {
            const uint32_t prefix_mask = static_cast<uint32_t>((size_t{1} << k) - 1);
            const double p_pos = refcheck::brute_pos(phis, prefix_mask, q);
            const double p_ecr = refcheck::brute_expected(phis, prefix_mask, cr);
            const uint32_t best = refcheck::brute_best_fixed_size(phis, k, q);
            if (p_pos < refcheck::brute_pos(phis, best, q) - 1e-12) {
                detail = "prefix loses on success probability";
                return false;
            }
            // the expected-CR maximum may be attained elsewhere; scan it too
            double best_ecr = -1.0;
            for (uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (static_cast<size_t>(std::popcount(mask)) != k) continue;
                best_ecr = std::max(best_ecr, refcheck::brute_expected(phis, mask, cr));
            }
            if (p_ecr < best_ecr - 1e-12) {
                detail = "prefix loses on expected complementary rate";
                return false;
            }
        }
    }
    detail = "200 instances, every k";
    return true;
}

// ---- criterion 4: pqa equals exhaustive search, zero oracle calls -------
bool criterion_pqa_optimal(std::string& detail) {
    Rng rng(derive_seed(0xACCE97, 4));
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 2 + rng.below(9);
        std::vector<ObjectRecord> recs;
        for (size_t i = 0; i < n; ++i)
            recs.push_back({i, static_cast<double>(i + 1) / static_cast<double>(n + 1), {}});
        const Dataset ds = build_index(std::move(recs));
        auto phis = random_phis(rng, n);
        std::sort(phis.begin(), phis.end(), std::greater<double>());
        Query q;
        q.gamma = 0.5 + 0.45 * rng.next_double();
        q.delta = 0.05 + 0.3 * rng.next_double();
        for (QueryKind kind : {QueryKind::precision_target, QueryKind::recall_target}) {
            q.kind = kind;
            OracleLedger ledger;
            const Answer a = pqa(ds, q, phis);
            if (ledger.count() != 0 || a.oracle_calls != 0) {
                detail = "pqa touched the oracle";
                return false;
            }
            uint32_t answer_mask = 0;
            for (size_t r = 1; r <= *a.prefix_k; ++r) answer_mask |= 1u << (r - 1);
            const Measure cr = complementary_measure(kind);
            if (refcheck::brute_pos(phis, answer_mask, q) < 1.0 - q.delta - 1e-9) {
                detail = "pqa answer not valid w.h.p.";
                return false;
            }
            double best_ecr = -1.0;
            for (uint32_t mask = 0; mask < (1u << n); ++mask) {
                if (refcheck::brute_pos(phis, mask, q) < 1.0 - q.delta) continue;
                best_ecr = std::max(best_ecr, refcheck::brute_expected(phis, mask, cr));
            }
            if (refcheck::brute_expected(phis, answer_mask, cr) < best_ecr - 1e-9) {
                detail = "pqa answer below the exhaustive optimum";
                return false;
            }
        }
    }
    detail = "200 instances, both kinds, ledger untouched";
    return true;
}

// ---- criterion 5: replacement & append monotonicity ---------------------
bool criterion_monotonicity(std::string& detail) {
    Rng rng(derive_seed(0xACCE97, 5));
    for (int trial = 0; trial < 5000; ++trial) {
        const size_t n = 2 + rng.below(9);
        const auto phis = random_phis(rng, n);
        const size_t i = rng.below(n);
        size_t j = rng.below(n);
        while (j == i) j = rng.below(n);
        pbd::MembershipProbs in_s, out_s;
        for (size_t t = 0; t < n; ++t) {
            if (t == i || t == j) continue;
            (rng.next_double() < 0.5 ? in_s : out_s).push_back(phis[t]);
        }
        auto in_s2 = in_s;
        auto out_s2 = out_s;
        const double lo = std::min(phis[i], phis[j]), hi = std::max(phis[i], phis[j]);
        in_s.push_back(lo);
        out_s.push_back(hi);
        in_s2.push_back(hi);
        out_s2.push_back(lo);
        const double gamma = 0.05 + 0.9 * rng.next_double();
        const auto pi = pbd::count_distribution(in_s), po = pbd::count_distribution(out_s);
        const auto pi2 = pbd::count_distribution(in_s2), po2 = pbd::count_distribution(out_s2);
        const bool ok = pbd::success_prob_precision(pi2, gamma) >= pbd::success_prob_precision(pi, gamma) - 1e-12 &&
                        pbd::success_prob_recall(pi2, po2, gamma) >= pbd::success_prob_recall(pi, po, gamma) - 1e-12 &&
                        pbd::expected_precision(pi2, in_s2.size()) >= pbd::expected_precision(pi, in_s.size()) - 1e-12 &&
                        pbd::expected_recall(pi2, po2) >= pbd::expected_recall(pi, po) - 1e-12;
        if (!ok) {
            detail = "replacement monotonicity violated";
            return false;
        }
        // usual stochastic order on the counts
        double tail = 0.0, tail2 = 0.0;
        for (size_t t = pi.size(); t-- > 0;) {
            tail += pi[t];
            tail2 += pi2[t];
            if (tail2 < tail - 1e-12) {
                detail = "stochastic order violated";
                return false;
            }
        }
    }
    for (int trial = 0; trial < 5000; ++trial) {
        const size_t n = 2 + rng.below(9);
        auto phis = random_phis(rng, n);
        std::sort(phis.begin(), phis.end(), std::greater<double>());
        const double gamma = 0.05 + 0.9 * rng.next_double();
        const size_t k = rng.below(n);
        pbd::MembershipProbs in_k(phis.begin(), phis.begin() + static_cast<long>(k));
        pbd::MembershipProbs out_k(phis.begin() + static_cast<long>(k), phis.end());
        pbd::MembershipProbs in_k1(phis.begin(), phis.begin() + static_cast<long>(k + 1));
        pbd::MembershipProbs out_k1(phis.begin() + static_cast<long>(k + 1), phis.end());
        const auto pi = pbd::count_distribution(in_k), po = pbd::count_distribution(out_k);
        const auto pi1 = pbd::count_distribution(in_k1), po1 = pbd::count_distribution(out_k1);
        if (pbd::success_prob_recall(pi1, po1, gamma) < pbd::success_prob_recall(pi, po, gamma) - 1e-12 ||
            pbd::expected_recall(pi1, po1) < pbd::expected_recall(pi, po) - 1e-12) {
            detail = "append monotonicity violated";
            return false;
        }
    }
    detail = "10000 cases, slack 1e-12";
    return true;
}

// ---- criterion 6: exact plan equals the naive reference on the grid -----
bool criterion_plan_grid(std::string& detail) {
    size_t checked = 0;
    for (size_t n = 10; n <= 200; ++n) {
        for (size_t c = 1; c <= std::min<size_t>(n, 50); ++c) {
            for (double delta : {0.01, 0.05, 0.1, 0.2}) {
                const SamplePlan a = plan_exact(n, c, delta);
                const SamplePlan b = refcheck::brute_plan(n, c, delta);
                if (a.s != b.s || a.m != b.m) {
                    detail = "mismatch at n=" + std::to_string(n) + " c=" + std::to_string(c) +
                             " delta=" + std::to_string(delta);
                    return false;
                }
                if (core_hit_prob(n, a.s, a.m, c) < 1.0 - delta) {
                    detail = "infeasible plan in the grid";
                    return false;
                }
                ++checked;
            }
        }
    }
    detail = std::to_string(checked) + " grid points";
    return true;
}

// ---- criterion 7: savings-ratio lower bounds ----------------------------
bool criterion_savings(std::string& detail) {
    Rng rng(derive_seed(0xACCE97, 7));
    for (int trial = 0; trial < 1000; ++trial) {
        const size_t n = 10 + rng.below(9991);
        const size_t c = 1 + rng.below(std::min<size_t>(n, 200));
        const double delta = 0.01 + 0.29 * rng.next_double();
        const SamplePlan exact = plan_exact(n, c, delta);
        const SamplePlan s1 = plan_approx_s1(n, c, delta);
        const SamplePlan m1 = plan_approx_m1(n, c, delta);
        const double nn = static_cast<double>(n), cc = static_cast<double>(c);
        const double xi_s1 = savings_ratio(n, s1, exact);
        const double xi_m1 = savings_ratio(n, m1, exact);
        const double bound_s1 = std::pow(delta, (-1.0 / cc) * (1.0 / nn - nn / (nn - 1.0))) * (1.0 - 1.0 / nn);
        const double bound_m1 = std::pow(delta, -1.0 / (nn * cc)) * (1.0 - 1.0 / nn + std::log(delta) / cc);
        if (xi_s1 > 1.0 + 1e-12 || xi_m1 > 1.0 + 1e-12) {
            detail = "a savings ratio exceeded 1";
            return false;
        }
        if (xi_s1 < bound_s1 - 1e-12 || xi_m1 < bound_m1 - 1e-12) {
            detail = "a lower bound failed at n=" + std::to_string(n) + " c=" + std::to_string(c);
            return false;
        }
    }
    // reference configuration: n = 10000, c = 100, delta = 0.1
    const SamplePlan exact = plan_exact(10000, 100, 0.1);
    const double xi_s1 = savings_ratio(10000, plan_approx_s1(10000, 100, 0.1), exact);
    const double xi_m1 = savings_ratio(10000, plan_approx_m1(10000, 100, 0.1), exact);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "reference point: xi_s1=%.6f xi_m1=%.6f", xi_s1, xi_m1);
    detail = buf;
    return xi_s1 >= 0.977 && xi_m1 >= 0.977;
}

// shared scenario machinery for the statistical criteria ------------------

harness::Scenario desk_scenario(uint64_t seed) {
    harness::Scenario sc;
    sc.n = 2000;
    sc.noise_sigma = 0.1;
    sc.radius = 0.9;
    sc.seed = seed;
    return sc;
}

// Generates datasets until the core set is nonempty and, for PT, closed
// (the guarantee under test is conditional on closure).
refcheck::ScenarioFn closed_core_scenario(const Query& q) {
    return [q](uint64_t seed) {
        for (uint64_t attempt = 0;; ++attempt) {
            const Dataset ds = harness::generate(desk_scenario(derive_seed(seed, attempt)));
            const IdSet nn = ground_truth_neighbors(ds, q.radius);
            const CoreSet core = core_set(ds, q, nn);
            if (core.size == 0) continue;
            if (q.kind == QueryKind::precision_target && !core.closed) continue;
            return ds;
        }
    };
}

// ---- criterion 8: csc statistical guarantee + oracle accounting ----------
bool criterion_csc(std::string& detail) {
    std::ostringstream note;
    for (QueryKind kind : {QueryKind::recall_target, QueryKind::precision_target}) {
        Query q;
        q.kind = kind;
        for (PlanMode mode : {PlanMode::exact, PlanMode::approx_s1, PlanMode::approx_m1}) {
            refcheck::StrategyFn strategy = [mode](const Dataset& ds, const Query& query, uint64_t seed) {
                const IdSet nn = ground_truth_neighbors(ds, query.radius);
                const size_t c = core_set(ds, query, nn).size;
                OracleFn oracle = [&ds](ObjectId id) { return ds.oracle_dist(id); };
                OracleLedger ledger;
                return csc(ds, query, c, query.delta, mode, oracle, ledger, seed);
            };
            const auto mc = refcheck::monte_carlo_success(strategy, closed_core_scenario(q), q, 500,
                                                          derive_seed(0xACCE97, 80 + static_cast<int>(mode)));
            const double floor_rate = 1.0 - q.delta - wilson_halfwidth(mc.rate, mc.trials);
            note << to_string(kind) << "/" << to_string(mode) << "=" << mc.rate << " ";
            if (mc.rate < floor_rate) {
                detail = "success rate " + std::to_string(mc.rate) + " below bound";
                return false;
            }
        }
    }
    // distinct probes match the predicted expected oracle calls on one fixed
    // dataset (the plan varies with the dataset, so pin the dataset)
    const Dataset ds = harness::generate(desk_scenario(20250810));
    Query q;
    q.kind = QueryKind::recall_target;
    const size_t c = core_set(ds, q, ground_truth_neighbors(ds, q.radius)).size;
    const SamplePlan plan = plan_exact(ds.size(), c, q.delta);
    Rng rng(derive_seed(0xACCE97, 88));
    DistinctSampler sampler(ds.size());
    std::vector<uint32_t> picks;
    std::vector<char> seen(ds.size());
    double sum = 0.0, sumsq = 0.0;
    const size_t trials = 100000;
    for (size_t t = 0; t < trials; ++t) {
        std::fill(seen.begin(), seen.end(), 0);
        size_t distinct = 0;
        for (size_t i = 0; i < plan.m; ++i) {
            picks.clear();
            sampler.draw(plan.s, rng, picks);
            for (uint32_t p : picks)
                if (!seen[p]) {
                    seen[p] = 1;
                    ++distinct;
                }
        }
        sum += static_cast<double>(distinct);
        sumsq += static_cast<double>(distinct) * static_cast<double>(distinct);
    }
    const double mean = sum / trials;
    const double se = std::sqrt((sumsq / trials - mean * mean) / trials);
    const double predicted = expected_oracle_calls(ds.size(), plan.s, plan.m);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "| plan s=%zu m=%zu, probes %.5f vs eoc %.5f (se %.5f)", plan.s, plan.m,
                  mean, predicted, se);
    note << buf;
    detail = note.str();
    // the 1e-9 covers the degenerate m=1 plan, where the count is exact and
    // the standard error collapses to zero
    return std::fabs(mean - predicted) <= 3.0 * se + 1e-9;
}

// ---- criterion 9: cse-rt overall guarantee -------------------------------
bool criterion_cse_rt(std::string& detail) {
    Query q;
    q.kind = QueryKind::recall_target;
    refcheck::StrategyFn strategy = [](const Dataset& ds, const Query& query, uint64_t seed) {
        OracleFn oracle = [&ds](ObjectId id) { return ds.oracle_dist(id); };
        OracleLedger ledger;
        return cse_rt(ds, query, 0.05, 0.1, PlanMode::approx_m1, oracle, ledger, seed);
    };
    const auto mc =
        refcheck::monte_carlo_success(strategy, closed_core_scenario(q), q, 500, derive_seed(0xACCE97, 9));
    detail = "success rate " + std::to_string(mc.rate);
    return mc.rate >= 1.0 - q.delta - wilson_halfwidth(mc.rate, mc.trials);
}

// ---- criterion 10: cse-pt hoeffding-branch failures ----------------------
bool criterion_cse_pt(std::string& detail) {
    Query q;
    q.kind = QueryKind::precision_target;
    size_t prefix_branch = 0, failures = 0;
    const size_t trials = 500;
    for (size_t t = 0; t < trials; ++t) {
        const Dataset ds = harness::generate(desk_scenario(derive_seed(0xACCE97 + 10, t)));
        const IdSet nn = ground_truth_neighbors(ds, q.radius);
        OracleFn oracle = [&ds](ObjectId id) { return ds.oracle_dist(id); };
        OracleLedger ledger;
        const Answer a = cse_pt(ds, q, 100, 0.001, PlanMode::approx_m1, oracle, ledger, derive_seed(0xBEEF, t));
        if (a.prefix_k) ++prefix_branch;
        if (!valid_answer(a.member_set(), nn, q.kind, q.gamma)) ++failures;
    }
    std::ostringstream note;
    note << "failures " << failures << "/" << trials << ", prefix branch " << prefix_branch;
    detail = note.str();
    return static_cast<double>(failures) / static_cast<double>(trials) <= q.delta;
}

// ---- criterion 11: perturbation replication ------------------------------
bool criterion_perturb(std::string& detail) {
    const std::vector<double> grid{-0.2, -0.1, 0.0, 0.1, 0.2};
    const size_t trials = 200;
    std::ostringstream note;
    for (QueryKind kind : {QueryKind::recall_target, QueryKind::precision_target}) {
        Query q;
        q.kind = kind;
        harness::Scenario sc = desk_scenario(derive_seed(0xACCE97, 11 + static_cast<int>(kind)));
        const auto points = harness::experiment_pqa_perturb(sc, q, grid, trials, nullptr);
        const auto& at = [&points, &grid](double g) -> const harness::PerturbPoint& {
            for (size_t i = 0; i < grid.size(); ++i)
                if (grid[i] == g) return points[i];
            throw std::logic_error("grid point missing");
        };
        const double zero_rate = at(0.0).success_rate;
        note << to_string(kind) << "@0=" << zero_rate << " ";
        if (zero_rate < 1.0 - q.delta - wilson_halfwidth(zero_rate, trials)) {
            detail = "unperturbed success rate too low";
            return false;
        }
        if (kind == QueryKind::recall_target) {
            note << "rt@-20=" << at(-0.2).success_rate << " cr@0=" << at(0.0).mean_cr
                 << " cr@+20=" << at(0.2).mean_cr << " ";
            if (at(-0.2).success_rate > 0.1) {
                detail = "negative perturbation kept succeeding";
                return false;
            }
            if (!(at(0.2).mean_cr < at(0.0).mean_cr)) {
                detail = "positive perturbation did not degrade CR";
                return false;
            }
        }
    }
    detail = note.str();
    return true;
}

// ---- criterion 12: byte-identical CLI reports ----------------------------
// Each repeat runs in its own directory with identical relative paths, so
// every artifact (written files and captured stdout) can be compared
// byte-for-byte across the two runs.
bool run_cli_in(const std::filesystem::path& dir, const std::string& args) {
    const std::string cmd =
        "cd " + dir.string() + " && " + g_cli_path + " " + args + " > stdout.json 2>/dev/null";
    return std::system(cmd.c_str()) == 0;
}

bool same_bytes(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    const std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return ca == cb;
}

bool criterion_determinism(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "CLI path not supplied";
        return false;
    }
    namespace fs = std::filesystem;
    const std::vector<std::pair<std::string, std::vector<std::string>>> stages{
        {"gen", {"gen --n 400 --noise-sigma 0.1 --seed 42 --out data.csv"}},
        {"exp",
         {"gen --n 300 --noise-sigma 0.1 --seed 42 --out data.csv",
          "exp-csc --n 300 --trials 15 --seed 9 --kind rt --modes exact,m1 --out runs.ndjson",
          "report --format csv runs.ndjson --out report.csv"}},
        {"query",
         {"gen --n 400 --noise-sigma 0.1 --seed 42 --out data.csv",
          "query --data data.csv --kind pt --algo cse --seed 4 --eps-p 0.01 --trials 3 --out runs.ndjson"}},
    };
    for (const auto& [stage, commands] : stages) {
        const fs::path d1 = fs::path("acceptance_tmp") / (stage + "_1");
        const fs::path d2 = fs::path("acceptance_tmp") / (stage + "_2");
        fs::remove_all(d1);
        fs::remove_all(d2);
        fs::create_directories(d1);
        fs::create_directories(d2);
        for (const auto& args : commands) {
            if (!run_cli_in(d1, args) || !run_cli_in(d2, args)) {
                detail = stage + ": CLI run failed";
                return false;
            }
        }
        for (const auto& entry : fs::directory_iterator(d1)) {
            const auto name = entry.path().filename();
            if (!same_bytes(entry.path(), d2 / name)) {
                detail = stage + ": " + name.string() + " differs between runs";
                return false;
            }
        }
    }

    // a config file overrides flags, and ORAQ_SEED supplies the default seed
    const fs::path da = fs::path("acceptance_tmp") / "override_a";
    const fs::path db = fs::path("acceptance_tmp") / "override_b";
    fs::remove_all(da);
    fs::remove_all(db);
    fs::create_directories(da);
    fs::create_directories(db);
    std::ofstream(da / "plan.cfg") << "delta=0.1\n";
    if (!run_cli_in(da, "plan --n 100 --c 10 --delta 0.3 --config plan.cfg") ||
        !run_cli_in(db, "plan --n 100 --c 10 --delta 0.1")) {
        detail = "override: CLI run failed";
        return false;
    }
    if (!same_bytes(da / "stdout.json", db / "stdout.json")) {
        detail = "config file did not override the conflicting flag";
        return false;
    }
    const std::string env_cmd = "cd " + da.string() + " && ORAQ_SEED=42 " + g_cli_path +
                                " gen --n 50 --noise-sigma 0.1 --out env.csv > env.json 2>/dev/null";
    if (std::system(env_cmd.c_str()) != 0 ||
        !run_cli_in(db, "gen --n 50 --noise-sigma 0.1 --seed 42 --out env.csv")) {
        detail = "seed-default runs failed";
        return false;
    }
    if (!same_bytes(da / "env.csv", db / "env.csv")) {
        detail = "ORAQ_SEED did not match an explicit --seed";
        return false;
    }
    detail = "artifacts identical across reruns; config overrides and ORAQ_SEED honoured";
    return true;
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<bool(std::string&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = std::filesystem::absolute(argv[1]).string();
    const std::vector<Criterion> criteria{
        {1, "convolution exactness vs enumeration", 10.0, criterion_convolution},
        {2, "success probability exactness vs enumeration", 60.0, criterion_pos},
        {3, "fixed-size optimality of proxy prefixes", 300.0, criterion_fixed_size},
        {4, "pqa optimality and zero oracle calls", 300.0, criterion_pqa_optimal},
        {5, "replacement and append monotonicity", 60.0, criterion_monotonicity},
        {6, "exact plan optimality on the full grid", 300.0, criterion_plan_grid},
        {7, "savings-ratio lower bounds", 60.0, criterion_savings},
        {8, "csc statistical guarantee and oracle accounting", 600.0, criterion_csc},
        {9, "cse-rt statistical guarantee", 600.0, criterion_cse_rt},
        {10, "cse-pt hoeffding-branch failure rate", 600.0, criterion_cse_pt},
        {11, "perturbed-prefix replication", 600.0, criterion_perturb},
        {12, "byte-identical CLI reports", 600.0, criterion_determinism},
    };
    int failures = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criterion.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > criterion.limit_seconds) {
            ok = false;
            detail += " [exceeded " + std::to_string(criterion.limit_seconds) + " s budget]";
        }
        std::printf("[%s] %2d %s (%s) [%.2f s]\n", ok ? "PASS" : "FAIL", criterion.id, criterion.name,
                    detail.c_str(), elapsed);
        std::fflush(stdout);
        failures += ok ? 0 : 1;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
