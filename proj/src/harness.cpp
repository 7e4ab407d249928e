#include "oraq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "json.hpp"
#include "oraq/io.hpp"
#include "oraq/pbd.hpp"
#include "oraq/pqa.hpp"
#include "oraq/pqe.hpp"
#include "oraq/rng.hpp"

namespace oraq::harness {

using nlohmann::json;

namespace {

double round6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::strtod(buf, nullptr);
}

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace

Dataset generate(const Scenario& sc) {
    if (!(sc.noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be non-negative");
    std::vector<double> proxies;
    if (sc.proxy_file.empty()) {
        Rng rng(derive_seed(sc.seed, 0));
        proxies.reserve(sc.n);
        for (size_t i = 0; i < sc.n; ++i) proxies.push_back(rng.next_double());
    } else {
        const Dataset src = load_dataset(sc.proxy_file);
        for (const auto& rec : src.by_rank()) proxies.push_back(rec.proxy_dist);
        if (sc.n != 0 && sc.n < proxies.size()) proxies.resize(sc.n);
    }
    Rng noise(derive_seed(sc.seed, 1));
    std::vector<ObjectRecord> records;
    records.reserve(proxies.size());
    for (size_t i = 0; i < proxies.size(); ++i) {
        const double oracle = std::clamp(proxies[i] + noise.normal(0.0, sc.noise_sigma), 0.0, 1.0);
        records.push_back({static_cast<ObjectId>(i), proxies[i], oracle});
    }
    return build_index(std::move(records));
}

void synth_generate(const Scenario& sc, const std::string& out_path) {
    save_dataset(out_path, generate(sc));
}

TrialRecord evaluate(const Dataset& ds, const Query& q, const Answer& ans, size_t trial, uint64_t scenario_seed) {
    TrialRecord rec;
    rec.trial = trial;
    rec.scenario_seed = scenario_seed;
    rec.algorithm = ans.algorithm;
    rec.prefix_k = ans.prefix_k;
    rec.answer_size = ans.member_ids.size();
    rec.oracle_calls = ans.oracle_calls;
    if (ds.has_oracle_dists()) {
        const IdSet nn = ground_truth_neighbors(ds, q.radius);
        const IdSet s = ans.member_set();
        rec.valid = valid_answer(s, nn, q.kind, q.gamma);
        rec.precision = measure(s, nn, Measure::precision);
        rec.recall = measure(s, nn, Measure::recall);
    }
    return rec;
}

std::string to_ndjson_line(const TrialRecord& rec) {
    json j;
    j["trial"] = rec.trial;
    j["scenario_seed"] = rec.scenario_seed;
    j["algorithm"] = rec.algorithm;
    j["variant"] = rec.variant;
    j["perturb"] = rec.perturb;
    j["k"] = rec.prefix_k ? json(*rec.prefix_k) : json(nullptr);
    j["answer_size"] = rec.answer_size;
    j["oracle_calls"] = rec.oracle_calls;
    j["valid"] = rec.valid ? json(*rec.valid) : json(nullptr);
    j["precision"] = rec.precision ? json(*rec.precision) : json(nullptr);
    j["recall"] = rec.recall ? json(*rec.recall) : json(nullptr);
    return j.dump();
}

TrialRecord record_from_json_line(const std::string& line) {
    const json j = json::parse(line);
    TrialRecord rec;
    rec.trial = j.at("trial").get<size_t>();
    rec.scenario_seed = j.at("scenario_seed").get<uint64_t>();
    rec.algorithm = j.at("algorithm").get<std::string>();
    rec.variant = j.value("variant", std::string());
    rec.perturb = j.value("perturb", 0.0);
    if (j.contains("k") && !j.at("k").is_null()) rec.prefix_k = j.at("k").get<size_t>();
    rec.answer_size = j.value("answer_size", size_t{0});
    rec.oracle_calls = j.value("oracle_calls", size_t{0});
    if (j.contains("valid") && !j.at("valid").is_null()) rec.valid = j.at("valid").get<bool>();
    if (j.contains("precision") && !j.at("precision").is_null()) rec.precision = j.at("precision").get<double>();
    if (j.contains("recall") && !j.at("recall").is_null()) rec.recall = j.at("recall").get<double>();
    return rec;
}

std::vector<TrialRecord> read_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::vector<TrialRecord> records;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

std::vector<PerturbPoint> experiment_pqa_perturb(const Scenario& base, const Query& q,
                                                 const std::vector<double>& grid, size_t trials,
                                                 std::vector<TrialRecord>* records) {
    if (!(base.noise_sigma > 0.0)) throw std::invalid_argument("perturbation study needs noise_sigma > 0");
    const NoiseModel model{0.0, base.noise_sigma};
    const Measure cr = complementary_measure(q.kind);
    std::vector<PerturbPoint> points(grid.size());
    std::vector<std::vector<double>> crs(grid.size());
    std::vector<size_t> successes(grid.size(), 0);
    size_t rec_index = 0;
    for (size_t t = 0; t < trials; ++t) {
        Scenario sc = base;
        sc.seed = derive_seed(base.seed, t);
        const Dataset ds = generate(sc);
        const IdSet nn = ground_truth_neighbors(ds, q.radius);
        const auto phis = pbd::membership_probs(ds, q.radius, [&model](double x) { return model.cdf(x); });
        const Answer best = pqa(ds, q, phis);
        const size_t k_star = *best.prefix_k;
        for (size_t g = 0; g < grid.size(); ++g) {
            const double target = (1.0 + grid[g]) * static_cast<double>(k_star);
            const size_t k = static_cast<size_t>(std::clamp(std::llround(target), 0LL,
                                                            static_cast<long long>(ds.size())));
            const Answer ans = prefix_answer(ds, k, 0, best.algorithm);
            TrialRecord rec = evaluate(ds, q, ans, rec_index++, sc.seed);
            char label[32];
            std::snprintf(label, sizeof(label), "perturb=%+.2f", grid[g]);
            rec.variant = label;
            rec.perturb = grid[g];
            successes[g] += rec.valid.value_or(false) ? 1 : 0;
            crs[g].push_back(measure(ans.member_set(), nn, cr));
            if (records) records->push_back(rec);
        }
    }
    for (size_t g = 0; g < grid.size(); ++g) {
        points[g].perturb = grid[g];
        points[g].trials = trials;
        points[g].success_rate = trials ? static_cast<double>(successes[g]) / static_cast<double>(trials) : 0.0;
        points[g].mean_cr = mean_of(crs[g]);
    }
    return points;
}

namespace {

// Draws scenario seeds until the trial is usable: a nonempty core set, and
// for PT queries a closed one (the guarantee under test assumes closure).
struct TrialData {
    Dataset ds;
    IdSet nn;
    CoreSet core;
    uint64_t seed = 0;
};

TrialData next_trial(const Scenario& base, const Query& q, size_t& cursor) {
    for (size_t attempts = 0; attempts < 1000; ++attempts) {
        Scenario sc = base;
        sc.seed = derive_seed(base.seed, cursor++);
        TrialData td;
        td.ds = generate(sc);
        td.seed = sc.seed;
        td.nn = ground_truth_neighbors(td.ds, q.radius);
        td.core = core_set(td.ds, q, td.nn);
        if (td.core.size == 0) continue;
        if (q.kind == QueryKind::precision_target && !td.core.closed) continue;
        return td;
    }
    throw std::runtime_error("could not generate a usable scenario in 1000 attempts");
}

}  // namespace

std::vector<CscPoint> experiment_csc(const Scenario& base, const Query& q, const std::vector<std::string>& modes,
                                     size_t trials, std::vector<TrialRecord>* records) {
    const Measure cr = complementary_measure(q.kind);
    std::vector<CscPoint> points(modes.size());
    for (size_t i = 0; i < modes.size(); ++i) points[i].mode = modes[i];
    std::vector<std::vector<double>> crs(modes.size());
    std::vector<std::vector<double>> calls(modes.size());
    std::vector<size_t> successes(modes.size(), 0);
    size_t cursor = 0;
    size_t rec_index = 0;
    for (size_t t = 0; t < trials; ++t) {
        const TrialData td = next_trial(base, q, cursor);
        const size_t n = td.ds.size();
        const size_t c = td.core.size;
        OracleFn oracle = [&td](ObjectId id) { return td.ds.oracle_dist(id); };
        for (size_t mi = 0; mi < modes.size(); ++mi) {
            const std::string& mode = modes[mi];
            OracleLedger ledger;
            const uint64_t run_seed = derive_seed(td.seed, 17 + mi);
            Answer ans;
            if (mode == "rand-s" || mode == "rand-sm") {
                Rng prng(derive_seed(td.seed, 41 + mi));
                SamplePlan plan;
                if (mode == "rand-s") {
                    plan.s = 1 + static_cast<size_t>(prng.below(n - c + 1));
                    plan.m = min_sample_count(plan.s, n, c, q.delta);
                } else {
                    plan.s = 1 + static_cast<size_t>(prng.below(n));
                    plan.m = 1 + static_cast<size_t>(prng.below(min_sample_count(1, n, c, q.delta)));
                }
                plan.predicted_eoc = expected_oracle_calls(n, plan.s, plan.m);
                ans = csc_with_plan(td.ds, q, plan, oracle, ledger, run_seed);
                ans.algorithm = "csc-" + mode;
            } else {
                const PlanMode pm = plan_mode_from_string(mode);
                const auto t0 = std::chrono::steady_clock::now();
                const SamplePlan plan = make_plan(n, c, q.delta, pm);
                const auto t1 = std::chrono::steady_clock::now();
                points[mi].plan_seconds += std::chrono::duration<double>(t1 - t0).count();
                ans = csc_with_plan(td.ds, q, plan, oracle, ledger, run_seed);
            }
            TrialRecord rec = evaluate(td.ds, q, ans, rec_index++, td.seed);
            rec.variant = mode;
            successes[mi] += rec.valid.value_or(false) ? 1 : 0;
            crs[mi].push_back(measure(ans.member_set(), td.nn, cr));
            calls[mi].push_back(static_cast<double>(ans.oracle_calls));
            if (records) records->push_back(rec);
        }
    }
    for (size_t mi = 0; mi < modes.size(); ++mi) {
        points[mi].trials = trials;
        points[mi].success_rate = trials ? static_cast<double>(successes[mi]) / static_cast<double>(trials) : 0.0;
        points[mi].mean_oracle_calls = mean_of(calls[mi]);
        points[mi].mean_cr = mean_of(crs[mi]);
    }
    return points;
}

CscPoint experiment_cse(const Scenario& base, const Query& q, const CseParams& params, size_t trials,
                        std::vector<TrialRecord>* records) {
    const Measure cr = complementary_measure(q.kind);
    CscPoint point;
    point.mode = to_string(params.mode);
    point.trials = trials;
    std::vector<double> crs, calls;
    size_t successes = 0;
    for (size_t t = 0; t < trials; ++t) {
        Scenario sc = base;
        sc.seed = derive_seed(base.seed, t);
        const Dataset ds = generate(sc);
        const IdSet nn = ground_truth_neighbors(ds, q.radius);
        OracleFn oracle = [&ds](ObjectId id) { return ds.oracle_dist(id); };
        OracleLedger ledger;
        const uint64_t run_seed = derive_seed(sc.seed, 7);
        const Answer ans = q.kind == QueryKind::recall_target
                               ? cse_rt(ds, q, params.delta_r, params.epsilon_r, params.mode, oracle, ledger, run_seed)
                               : cse_pt(ds, q, params.b_prime, params.epsilon_p, params.mode, oracle, ledger, run_seed);
        TrialRecord rec = evaluate(ds, q, ans, t, sc.seed);
        rec.variant = point.mode;
        successes += rec.valid.value_or(false) ? 1 : 0;
        crs.push_back(measure(ans.member_set(), nn, cr));
        calls.push_back(static_cast<double>(ans.oracle_calls));
        if (records) records->push_back(rec);
    }
    point.success_rate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    point.mean_oracle_calls = mean_of(calls);
    point.mean_cr = mean_of(crs);
    return point;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::vector<const TrialRecord*>> groups;
    for (const auto& rec : records) groups[{rec.algorithm, rec.variant}].push_back(&rec);
    std::vector<AggregateRow> rows;
    for (const auto& [key, recs] : groups) {
        AggregateRow row;
        row.algorithm = key.first;
        row.variant = key.second;
        row.trials = recs.size();
        std::map<uint64_t, std::pair<size_t, size_t>> by_seed;  // seed -> (valid, total)
        size_t valid_count = 0;
        double prec = 0.0, rec_sum = 0.0, calls = 0.0, sizes = 0.0;
        for (const auto* r : recs) {
            const bool v = r->valid.value_or(false);
            valid_count += v ? 1 : 0;
            auto& cell = by_seed[r->scenario_seed];
            cell.first += v ? 1 : 0;
            cell.second += 1;
            prec += r->precision.value_or(0.0);
            rec_sum += r->recall.value_or(0.0);
            calls += static_cast<double>(r->oracle_calls);
            sizes += static_cast<double>(r->answer_size);
        }
        const double nt = static_cast<double>(recs.size());
        row.success_rate = valid_count / nt;
        double per_seed = 0.0;
        for (const auto& [seed, cell] : by_seed)
            per_seed += static_cast<double>(cell.first) / static_cast<double>(cell.second);
        row.success_rate_by_scenario = per_seed / static_cast<double>(by_seed.size());
        row.mean_precision = prec / nt;
        row.mean_recall = rec_sum / nt;
        row.mean_oracle_calls = calls / nt;
        row.mean_answer_size = sizes / nt;
        rows.push_back(row);
    }
    return rows;
}

std::string render_csv(const std::vector<AggregateRow>& rows) {
    std::string out =
        "algorithm,variant,trials,success_rate,success_rate_by_scenario,"
        "mean_precision,mean_recall,mean_oracle_calls,mean_answer_size\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", r.algorithm.c_str(),
                      r.variant.c_str(), r.trials, r.success_rate, r.success_rate_by_scenario, r.mean_precision,
                      r.mean_recall, r.mean_oracle_calls, r.mean_answer_size);
        out += buf;
    }
    return out;
}

std::string render_json(const std::vector<AggregateRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["algorithm"] = r.algorithm;
        j["variant"] = r.variant;
        j["trials"] = r.trials;
        j["success_rate"] = round6(r.success_rate);
        j["success_rate_by_scenario"] = round6(r.success_rate_by_scenario);
        j["mean_precision"] = round6(r.mean_precision);
        j["mean_recall"] = round6(r.mean_recall);
        j["mean_oracle_calls"] = round6(r.mean_oracle_calls);
        j["mean_answer_size"] = round6(r.mean_answer_size);
        arr.push_back(j);
    }
    return arr.dump();
}

std::map<std::string, std::string> parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open config");
    std::map<std::string, std::string> kv;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

}  // namespace oraq::harness
