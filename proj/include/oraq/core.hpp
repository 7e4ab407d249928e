#ifndef ORAQ_CORE_HPP
#define ORAQ_CORE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace oraq {

using ObjectId = uint64_t;
using IdSet = std::unordered_set<ObjectId>;

struct ObjectRecord {
    ObjectId id = 0;
    double proxy_dist = 0.0;                // in [0,1]
    std::optional<double> oracle_dist;      // in [0,1]; present on simulation data
};

enum class QueryKind { precision_target, recall_target };
enum class Measure { precision, recall };

Measure main_measure(QueryKind kind);
Measure complementary_measure(QueryKind kind);

const char* to_string(QueryKind kind);
QueryKind query_kind_from_string(const std::string& s);

struct Query {
    QueryKind kind = QueryKind::recall_target;
    double gamma = 0.95;
    double delta = 0.1;
    double radius = 0.9;

    void validate() const;  // throws std::invalid_argument
};

/**
 * Immutable collection of objects indexed by ascending proxy distance.
 * Rank 1 is the proxy-nearest object; ties break by ascending id, so the
 * index is a deterministic bijection onto 1..size().
 */
class Dataset {
public:
    size_t size() const { return ordered_.size(); }
    bool empty() const { return ordered_.empty(); }

    const ObjectRecord& at_rank(size_t rank) const;  // rank in 1..size()
    size_t rank_of(ObjectId id) const;
    const std::vector<ObjectRecord>& by_rank() const { return ordered_; }

    bool has_oracle_dists() const { return has_oracle_; }
    double oracle_dist(ObjectId id) const;

    friend Dataset build_index(std::vector<ObjectRecord> records);

private:
    std::vector<ObjectRecord> ordered_;
    std::unordered_map<ObjectId, size_t> rank_;
    bool has_oracle_ = false;
};

// Validates records (distances in [0,1], unique ids) and builds the sorted
// proxy index. Deterministic for identical input.
Dataset build_index(std::vector<ObjectRecord> records);

// The k proxy-nearest objects, in rank order; k in 0..size().
std::vector<ObjectId> prefix(const Dataset& ds, size_t k);

// precision = |S∩NN|/|S| (1 if S empty), recall = |S∩NN|/|NN| (1 if NN empty).
double measure(const IdSet& s, const IdSet& neighbors, Measure which);

// Decides count/total >= gamma on integer counts; total == 0 is vacuously
// true. Products within 1e-12 of an integer are snapped onto it so that
// thresholds like 0.9*10 do not flip on float noise.
bool meets_target(size_t count, size_t total, double gamma);

bool valid_answer(const IdSet& s, const IdSet& neighbors, QueryKind kind, double gamma);

struct CoreSet {
    std::vector<ObjectId> members;  // ascending proxy rank
    size_t size = 0;
    bool closed = false;
};

// Oracle neighbors whose proxy prefix is a valid answer, plus the closure
// predicate for the query kind. Requires ground-truth neighbors.
CoreSet core_set(const Dataset& ds, const Query& q, const IdSet& neighbors);

// Ids with ground-truth oracle distance <= radius. Requires oracle distances.
IdSet ground_truth_neighbors(const Dataset& ds, double radius);

/**
 * Distinct-oracle-call accounting; repeated probes of an id are free.
 * Not synchronised: give each concurrent run its own ledger.
 */
class OracleLedger {
public:
    bool record(ObjectId id) { return probed_.insert(id).second; }
    size_t count() const { return probed_.size(); }
    const IdSet& probed() const { return probed_; }

private:
    IdSet probed_;
};

using OracleFn = std::function<double(ObjectId)>;

/**
 * Per-run oracle memoisation. First probe of an id charges the ledger and
 * invokes the oracle; repeats are served from the cache. calls() is the
 * distinct-probe count of this run regardless of prior ledger contents.
 */
class ProbeCache {
public:
    ProbeCache(OracleFn oracle, OracleLedger& ledger) : oracle_(std::move(oracle)), ledger_(ledger) {}

    double dist(ObjectId id) {
        auto it = seen_.find(id);
        if (it != seen_.end()) return it->second;
        const double d = oracle_(id);
        seen_.emplace(id, d);
        ledger_.record(id);
        return d;
    }

    size_t calls() const { return seen_.size(); }
    const std::unordered_map<ObjectId, double>& seen() const { return seen_; }

private:
    OracleFn oracle_;
    OracleLedger& ledger_;
    std::unordered_map<ObjectId, double> seen_;
};

struct Answer {
    std::vector<ObjectId> member_ids;  // ascending id
    std::optional<size_t> prefix_k;    // set when the answer is a proxy prefix
    size_t oracle_calls = 0;
    std::string algorithm;

    IdSet member_set() const { return IdSet(member_ids.begin(), member_ids.end()); }
};

Answer prefix_answer(const Dataset& ds, size_t k, size_t oracle_calls, std::string algorithm);

namespace detail {

// Nearest integer when x is within 1e-12 (relative) of one, else ceil/floor.
double ceil_snap(double x);
double floor_snap(double x);

// Smallest integer count with count/total >= gamma.
size_t min_hits_for(size_t total, double gamma);

// Largest integer k with inside/(inside+k) >= gamma.
size_t max_outside_for(size_t inside, double gamma);

}  // namespace detail

}  // namespace oraq

#endif  // ORAQ_CORE_HPP
