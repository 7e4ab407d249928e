#ifndef ORAQ_PQA_HPP
#define ORAQ_PQA_HPP

#include "oraq/core.hpp"
#include "oraq/pbd.hpp"

namespace oraq {

/**
 * Zero-oracle-call answers when membership probabilities are known.
 *
 * pqa_pt scans all prefix lengths and returns the largest one whose success
 * probability is at least 1-delta (precision of prefixes is not monotone, so
 * the scan cannot stop early). pqa_rt binary-searches the smallest feasible
 * prefix, then extends it to the prefix of maximal expected precision,
 * keeping the smallest length on ties.
 */
Answer pqa_pt(const Dataset& ds, const pbd::MembershipProbs& phis, double gamma, double delta);
Answer pqa_rt(const Dataset& ds, const pbd::MembershipProbs& phis, double gamma, double delta);

// Smallest prefix length whose recall success probability reaches 1-delta
// (found by binary search; such a length always exists because the full
// dataset has recall 1).
size_t pqa_rt_lower_prefix(const pbd::MembershipProbs& phis, double gamma, double delta);

// Dispatch on the query kind; q.radius is already encoded in phis.
Answer pqa(const Dataset& ds, const Query& q, const pbd::MembershipProbs& phis);

}  // namespace oraq

#endif  // ORAQ_PQA_HPP
