#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oraq/coreset.hpp"
#include "oraq/harness.hpp"
#include "oraq/io.hpp"
#include "oraq/pbd.hpp"
#include "oraq/pqa.hpp"
#include "oraq/pqe.hpp"
#include "oraq/rng.hpp"

using nlohmann::json;
using namespace oraq;

namespace {

struct Options {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string str(const std::string& key, const std::string& fallback = "") const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }

    std::string require(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error("missing required flag --" + key);
        return it->second;
    }

    double num(const std::string& key, double fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : std::stod(it->second);
    }

    size_t count(const std::string& key, size_t fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : static_cast<size_t>(std::stoull(it->second));
    }

    uint64_t seed() const {
        auto it = kv.find("seed");
        if (it != kv.end()) return std::stoull(it->second);
        if (const char* env = std::getenv("ORAQ_SEED")) return std::stoull(env);
        return 0;
    }
};

// Flags first, then config-file overrides (config wins), then ORAQ_SEED as
// the seed of last resort.
Options parse_options(int argc, char** argv, int start) {
    Options opt;
    for (int i = start; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--", 0) != 0) throw std::runtime_error("unexpected argument '" + arg + "'");
        arg = arg.substr(2);
        if (i + 1 >= argc) throw std::runtime_error("flag --" + arg + " needs a value");
        opt.kv[arg] = argv[++i];
    }
    if (opt.has("config"))
        for (const auto& [k, v] : harness::parse_config(opt.kv["config"])) opt.kv[k] = v;
    return opt;
}

Query query_from(const Options& opt) {
    Query q;
    q.kind = query_kind_from_string(opt.str("kind", "rt"));
    q.gamma = opt.num("gamma", 0.95);
    q.delta = opt.num("delta", 0.1);
    q.radius = opt.num("radius", 0.9);
    q.validate();
    return q;
}

harness::Scenario scenario_from(const Options& opt) {
    harness::Scenario sc;
    sc.n = opt.count("n", 2000);
    sc.noise_sigma = opt.num("noise-sigma", 0.1);
    sc.radius = opt.num("radius", 0.9);
    sc.seed = opt.seed();
    sc.proxy_file = opt.str("proxy-file");
    return sc;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error(path + ": write failed");
}

void emit_records(const Options& opt, const std::vector<harness::TrialRecord>& records) {
    if (!opt.has("out")) return;
    std::string text;
    for (const auto& rec : records) {
        text += harness::to_ndjson_line(rec);
        text += '\n';
    }
    write_text(opt.str("out"), text);
}

json summary_of(const std::vector<harness::TrialRecord>& records) {
    json rows = json::array();
    for (const auto& row : harness::aggregate(records)) rows.push_back(json::parse(harness::render_json({row}))[0]);
    return rows;
}

int cmd_gen(const Options& opt) {
    const harness::Scenario sc = scenario_from(opt);
    harness::synth_generate(sc, opt.require("out"));
    json j;
    j["command"] = "gen";
    j["n"] = sc.n;
    j["noise_sigma"] = sc.noise_sigma;
    j["seed"] = sc.seed;
    j["out"] = opt.str("out");
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_query(const Options& opt) {
    const Dataset ds = load_dataset(opt.require("data"));
    const Query q = query_from(opt);
    const std::string algo = opt.require("algo");
    const size_t trials = opt.count("trials", 1);
    const uint64_t seed = opt.seed();
    const bool validate = opt.str("validate", ds.has_oracle_dists() ? "on" : "off") == "on";
    if (validate && !ds.has_oracle_dists())
        throw std::runtime_error("validation requested but the dataset has no oracle_dist column");

    OracleFn oracle = [&ds](ObjectId id) { return ds.oracle_dist(id); };
    std::vector<harness::TrialRecord> records;
    for (size_t t = 0; t < trials; ++t) {
        const uint64_t run_seed = derive_seed(seed, t);
        OracleLedger ledger;
        Answer ans;
        if (algo == "pqa") {
            const double sigma = opt.num("noise-sigma", 0.1);
            if (!(sigma > 0.0)) throw std::runtime_error("pqa needs --noise-sigma > 0");
            const NoiseModel model{0.0, sigma};
            const auto phis = pbd::membership_probs(ds, q.radius, [&model](double x) { return model.cdf(x); });
            ans = pqa(ds, q, phis);
        } else if (algo == "pqe") {
            ans = pqe(ds, q, opt.count("b", 100), opt.num("sigma0", 0.3), oracle, ledger, run_seed);
        } else if (algo == "csc") {
            const size_t c = opt.count("c", 0);
            if (c == 0) throw std::runtime_error("csc needs --c (known core-set size)");
            ans = csc(ds, q, c, q.delta, plan_mode_from_string(opt.str("mode", "exact")), oracle, ledger, run_seed);
        } else if (algo == "cse") {
            const PlanMode mode = plan_mode_from_string(opt.str("mode", "m1"));
            ans = q.kind == QueryKind::recall_target
                      ? cse_rt(ds, q, opt.num("delta-r", 0.05), opt.num("eps-r", 0.1), mode, oracle, ledger, run_seed)
                      : cse_pt(ds, q, opt.count("b-prime", 100), opt.num("eps-p", 0.001), mode, oracle, ledger,
                               run_seed);
        } else {
            throw std::runtime_error("unknown --algo '" + algo + "' (expected pqa, pqe, csc or cse)");
        }
        if (validate) {
            records.push_back(harness::evaluate(ds, q, ans, t, seed));
        } else {
            harness::TrialRecord rec;
            rec.trial = t;
            rec.scenario_seed = seed;
            rec.algorithm = ans.algorithm;
            rec.prefix_k = ans.prefix_k;
            rec.answer_size = ans.member_ids.size();
            rec.oracle_calls = ans.oracle_calls;
            records.push_back(rec);
        }
    }
    emit_records(opt, records);
    json j;
    j["command"] = "query";
    j["algo"] = algo;
    j["kind"] = to_string(q.kind);
    j["trials"] = trials;
    j["summary"] = summary_of(records);
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_plan(const Options& opt) {
    const size_t n = opt.count("n", 2000);
    const size_t c = opt.count("c", 1);
    const double delta = opt.num("delta", 0.1);
    const std::string mode = opt.str("mode", "all");
    const SamplePlan exact = plan_exact(n, c, delta);
    json plans = json::array();
    auto add = [&](const SamplePlan& p) {
        json j;
        j["provenance"] = to_string(p.provenance);
        j["s"] = p.s;
        j["m"] = p.m;
        j["predicted_eoc"] = p.predicted_eoc;
        j["hit_prob"] = core_hit_prob(n, p.s, p.m, c);
        j["savings_ratio"] = savings_ratio(n, p, exact);
        plans.push_back(j);
    };
    if (mode == "all") {
        add(exact);
        add(plan_approx_s1(n, c, delta));
        add(plan_approx_m1(n, c, delta));
    } else {
        add(make_plan(n, c, delta, plan_mode_from_string(mode)));
    }
    json j;
    j["command"] = "plan";
    j["n"] = n;
    j["c"] = c;
    j["delta"] = delta;
    j["plans"] = plans;
    const std::string text = j.dump();
    if (opt.has("out")) write_text(opt.str("out"), text + "\n");
    std::cout << text << "\n";
    return 0;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
    if (grid.empty()) throw std::runtime_error("empty perturbation grid");
    return grid;
}

int cmd_exp_pqa_perturb(const Options& opt) {
    const harness::Scenario sc = scenario_from(opt);
    const Query q = query_from(opt);
    const auto grid = parse_grid(opt.str("grid", "-0.2,-0.1,0,0.1,0.2"));
    const size_t trials = opt.count("trials", 200);
    std::vector<harness::TrialRecord> records;
    const auto points = harness::experiment_pqa_perturb(sc, q, grid, trials, &records);
    emit_records(opt, records);
    json pts = json::array();
    for (const auto& p : points) {
        json j;
        j["perturb"] = p.perturb;
        j["trials"] = p.trials;
        j["success_rate"] = p.success_rate;
        j["mean_cr"] = p.mean_cr;
        pts.push_back(j);
    }
    json j;
    j["command"] = "exp-pqa-perturb";
    j["kind"] = to_string(q.kind);
    j["points"] = pts;
    std::cout << j.dump() << "\n";
    return 0;
}

std::vector<std::string> parse_modes(const std::string& text) {
    std::vector<std::string> modes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) modes.push_back(item);
    if (modes.empty()) throw std::runtime_error("empty mode list");
    return modes;
}

int cmd_exp_csc(const Options& opt) {
    const harness::Scenario sc = scenario_from(opt);
    const Query q = query_from(opt);
    const auto modes = parse_modes(opt.str("modes", "exact,s1,m1"));
    const size_t trials = opt.count("trials", 100);
    std::vector<harness::TrialRecord> records;
    const auto points = harness::experiment_csc(sc, q, modes, trials, &records);
    emit_records(opt, records);
    json pts = json::array();
    for (const auto& p : points) {
        json j;
        j["mode"] = p.mode;
        j["trials"] = p.trials;
        j["success_rate"] = p.success_rate;
        j["mean_oracle_calls"] = p.mean_oracle_calls;
        j["mean_cr"] = p.mean_cr;
        pts.push_back(j);
        // timing is diagnostics only; keep it out of the deterministic report
        std::cerr << "# plan mode " << p.mode << ": " << p.plan_seconds << " s planning CPU\n";
    }
    json j;
    j["command"] = "exp-csc";
    j["kind"] = to_string(q.kind);
    j["points"] = pts;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_exp_cse(const Options& opt) {
    const harness::Scenario sc = scenario_from(opt);
    const Query q = query_from(opt);
    harness::CseParams params;
    params.mode = plan_mode_from_string(opt.str("mode", "m1"));
    params.delta_r = opt.num("delta-r", 0.05);
    params.epsilon_r = opt.num("eps-r", 0.1);
    params.b_prime = opt.count("b-prime", 100);
    params.epsilon_p = opt.num("eps-p", 0.001);
    const size_t trials = opt.count("trials", 100);
    std::vector<harness::TrialRecord> records;
    const auto point = harness::experiment_cse(sc, q, params, trials, &records);
    emit_records(opt, records);
    json j;
    j["command"] = "exp-cse";
    j["kind"] = to_string(q.kind);
    j["mode"] = point.mode;
    j["trials"] = point.trials;
    j["success_rate"] = point.success_rate;
    j["mean_oracle_calls"] = point.mean_oracle_calls;
    j["mean_cr"] = point.mean_cr;
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_report(const Options& opt, const std::vector<std::string>& files) {
    if (files.empty()) throw std::runtime_error("report needs at least one run file");
    std::vector<harness::TrialRecord> records;
    for (const auto& f : files) {
        auto part = harness::read_records(f);
        records.insert(records.end(), part.begin(), part.end());
    }
    const auto rows = harness::aggregate(records);
    const std::string format = opt.str("format", "csv");
    std::string text;
    if (format == "csv")
        text = harness::render_csv(rows);
    else if (format == "json")
        text = harness::render_json(rows) + "\n";
    else
        throw std::runtime_error("unknown --format '" + format + "' (expected csv or json)");
    if (opt.has("out"))
        write_text(opt.str("out"), text);
    else
        std::cout << text;
    return 0;
}

void usage() {
    std::cout << "usage: oraq <command> [flags]\n"
                 "\n"
                 "commands:\n"
                 "  gen              synthesize a dataset file (--n --noise-sigma --seed --out)\n"
                 "  query            answer one query (--data --kind --algo pqa|pqe|csc|cse ...)\n"
                 "  plan             print sample plans (--n --c --delta [--mode exact|s1|m1|all])\n"
                 "  exp-pqa-perturb  perturbed-prefix study (--kind --trials --grid --out)\n"
                 "  exp-csc          sample-plan study (--kind --trials --modes --out)\n"
                 "  exp-cse          unknown-core study (--kind --trials --mode --out)\n"
                 "  report           aggregate run files (--format csv|json [--out] files...)\n"
                 "\n"
                 "common flags: --gamma --delta --radius --seed --trials --config --out\n"
                 "ORAQ_SEED supplies the default seed.\n";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage();
        return 1;
    }
    const std::string cmd = argv[1];
    try {
        if (cmd == "help" || cmd == "--help" || cmd == "-h") {
            usage();
            return 0;
        }
        if (cmd == "report") {
            // positional run files may precede or follow flags
            std::vector<std::string> files;
            std::vector<char*> flag_args{argv[0]};
            for (int i = 2; i < argc; ++i) {
                if (std::string(argv[i]).rfind("--", 0) == 0) {
                    flag_args.push_back(argv[i]);
                    if (i + 1 < argc) flag_args.push_back(argv[++i]);
                } else {
                    files.emplace_back(argv[i]);
                }
            }
            const Options opt = parse_options(static_cast<int>(flag_args.size()), flag_args.data(), 1);
            return cmd_report(opt, files);
        }
        const Options opt = parse_options(argc, argv, 2);
        if (cmd == "gen") return cmd_gen(opt);
        if (cmd == "query") return cmd_query(opt);
        if (cmd == "plan") return cmd_plan(opt);
        if (cmd == "exp-pqa-perturb") return cmd_exp_pqa_perturb(opt);
        if (cmd == "exp-csc") return cmd_exp_csc(opt);
        if (cmd == "exp-cse") return cmd_exp_cse(opt);
        std::cerr << "unknown command '" << cmd << "'\n";
        usage();
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
