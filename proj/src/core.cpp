#include "oraq/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oraq {

Measure main_measure(QueryKind kind) {
    return kind == QueryKind::precision_target ? Measure::precision : Measure::recall;
}

Measure complementary_measure(QueryKind kind) {
    return kind == QueryKind::precision_target ? Measure::recall : Measure::precision;
}

const char* to_string(QueryKind kind) {
    return kind == QueryKind::precision_target ? "pt" : "rt";
}

QueryKind query_kind_from_string(const std::string& s) {
    if (s == "pt") return QueryKind::precision_target;
    if (s == "rt") return QueryKind::recall_target;
    throw std::invalid_argument("unknown query kind '" + s + "' (expected pt or rt)");
}

void Query::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be strictly inside (0,1)");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be strictly inside (0,1)");
    if (!(radius >= 0.0 && radius <= 1.0)) throw std::invalid_argument("radius must be in [0,1]");
}

const ObjectRecord& Dataset::at_rank(size_t rank) const {
    if (rank < 1 || rank > ordered_.size()) throw std::out_of_range("rank out of range");
    return ordered_[rank - 1];
}

size_t Dataset::rank_of(ObjectId id) const {
    auto it = rank_.find(id);
    if (it == rank_.end()) throw std::out_of_range("unknown object id");
    return it->second;
}

double Dataset::oracle_dist(ObjectId id) const {
    const auto& rec = at_rank(rank_of(id));
    if (!rec.oracle_dist) throw std::runtime_error("dataset has no oracle distance for id " + std::to_string(id));
    return *rec.oracle_dist;
}

Dataset build_index(std::vector<ObjectRecord> records) {
    for (const auto& r : records) {
        if (!std::isfinite(r.proxy_dist) || r.proxy_dist < 0.0 || r.proxy_dist > 1.0)
            throw std::invalid_argument("proxy_dist outside [0,1] for id " + std::to_string(r.id));
        if (r.oracle_dist && (!std::isfinite(*r.oracle_dist) || *r.oracle_dist < 0.0 || *r.oracle_dist > 1.0))
            throw std::invalid_argument("oracle_dist outside [0,1] for id " + std::to_string(r.id));
    }
    std::sort(records.begin(), records.end(), [](const ObjectRecord& a, const ObjectRecord& b) {
        if (a.proxy_dist != b.proxy_dist) return a.proxy_dist < b.proxy_dist;
        return a.id < b.id;
    });
    Dataset ds;
    ds.ordered_ = std::move(records);
    ds.rank_.reserve(ds.ordered_.size());
    ds.has_oracle_ = !ds.ordered_.empty();
    for (size_t i = 0; i < ds.ordered_.size(); ++i) {
        if (!ds.rank_.emplace(ds.ordered_[i].id, i + 1).second)
            throw std::invalid_argument("duplicate object id " + std::to_string(ds.ordered_[i].id));
        if (!ds.ordered_[i].oracle_dist) ds.has_oracle_ = false;
    }
    return ds;
}

std::vector<ObjectId> prefix(const Dataset& ds, size_t k) {
    if (k > ds.size()) throw std::out_of_range("prefix length exceeds dataset size");
    std::vector<ObjectId> out;
    out.reserve(k);
    for (size_t i = 0; i < k; ++i) out.push_back(ds.by_rank()[i].id);
    return out;
}

double measure(const IdSet& s, const IdSet& neighbors, Measure which) {
    size_t hits = 0;
    for (ObjectId id : s)
        if (neighbors.count(id)) ++hits;
    const size_t denom = which == Measure::precision ? s.size() : neighbors.size();
    if (denom == 0) return 1.0;  // vacuous convention
    return static_cast<double>(hits) / static_cast<double>(denom);
}

namespace detail {

namespace {
bool near_integer(double x, double r) { return std::fabs(x - r) <= 1e-12 * std::max(1.0, std::fabs(x)); }
}  // namespace

double ceil_snap(double x) {
    const double r = std::nearbyint(x);
    return near_integer(x, r) ? r : std::ceil(x);
}

double floor_snap(double x) {
    const double r = std::nearbyint(x);
    return near_integer(x, r) ? r : std::floor(x);
}

size_t min_hits_for(size_t total, double gamma) {
    const double t = ceil_snap(static_cast<double>(total) * gamma);
    return t <= 0.0 ? 0 : static_cast<size_t>(t);
}

size_t max_outside_for(size_t inside, double gamma) {
    const double t = floor_snap(static_cast<double>(inside) * (1.0 - gamma) / gamma);
    return t <= 0.0 ? 0 : static_cast<size_t>(t);
}

}  // namespace detail

bool meets_target(size_t count, size_t total, double gamma) {
    if (total == 0) return true;
    return count >= detail::min_hits_for(total, gamma);
}

bool valid_answer(const IdSet& s, const IdSet& neighbors, QueryKind kind, double gamma) {
    size_t hits = 0;
    for (ObjectId id : s)
        if (neighbors.count(id)) ++hits;
    const size_t denom = kind == QueryKind::precision_target ? s.size() : neighbors.size();
    return meets_target(hits, denom, gamma);
}

CoreSet core_set(const Dataset& ds, const Query& q, const IdSet& neighbors) {
    CoreSet out;
    const size_t nn = neighbors.size();
    size_t hits = 0;
    std::vector<char> member_flags;  // one flag per neighbor, ascending rank
    for (size_t rank = 1; rank <= ds.size(); ++rank) {
        const ObjectId id = ds.by_rank()[rank - 1].id;
        if (!neighbors.count(id)) continue;
        ++hits;
        const bool member = q.kind == QueryKind::recall_target ? meets_target(hits, nn, q.gamma)
                                                               : meets_target(hits, rank, q.gamma);
        member_flags.push_back(member ? 1 : 0);
        if (member) out.members.push_back(id);
    }
    out.size = out.members.size();
    // RT closure: flags must be a suffix of the neighbor sequence; PT: a prefix.
    out.closed = true;
    if (q.kind == QueryKind::recall_target) {
        for (size_t i = 1; i < member_flags.size(); ++i)
            if (member_flags[i - 1] && !member_flags[i]) out.closed = false;
    } else {
        for (size_t i = 1; i < member_flags.size(); ++i)
            if (!member_flags[i - 1] && member_flags[i]) out.closed = false;
    }
    return out;
}

IdSet ground_truth_neighbors(const Dataset& ds, double radius) {
    IdSet nn;
    for (const auto& rec : ds.by_rank()) {
        if (!rec.oracle_dist) throw std::runtime_error("ground truth requested but oracle distances are missing");
        if (*rec.oracle_dist <= radius) nn.insert(rec.id);
    }
    return nn;
}

Answer prefix_answer(const Dataset& ds, size_t k, size_t oracle_calls, std::string algorithm) {
    Answer a;
    a.member_ids = prefix(ds, k);
    std::sort(a.member_ids.begin(), a.member_ids.end());
    a.prefix_k = k;
    a.oracle_calls = oracle_calls;
    a.algorithm = std::move(algorithm);
    return a;
}

}  // namespace oraq
