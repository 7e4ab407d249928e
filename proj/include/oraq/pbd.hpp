#ifndef ORAQ_PBD_HPP
#define ORAQ_PBD_HPP

#include <functional>
#include <vector>

#include "oraq/core.hpp"

// Poisson-binomial machinery. Everything here is a pure function of its
// inputs and safe to evaluate concurrently.
namespace oraq::pbd {

// Membership probability per object, aligned to proxy-index order
// (position i holds the probability of the object at rank i+1).
using MembershipProbs = std::vector<double>;

// Probability mass over neighbor counts 0..n.
using ProbMass = std::vector<double>;

using NoiseCdf = std::function<double(double)>;

// phi_i = noise_cdf(radius - proxy_dist_i) for every object, in rank order.
// The cdf must be monotone non-decreasing with range [0,1].
MembershipProbs membership_probs(const Dataset& ds, double radius, const NoiseCdf& noise_cdf);

// One direct-convolution step: extends p by a Bernoulli(phi) trial.
void convolve_bernoulli_inplace(ProbMass& p, double phi);
ProbMass convolve_bernoulli(const ProbMass& p, double phi);

// Exact Poisson-binomial mass over 0..|phis| via direct convolution;
// independent of inclusion order.
ProbMass count_distribution(const MembershipProbs& phis);

// Pr[count/|S| >= gamma] where |S| = p.size()-1.
double success_prob_precision(const ProbMass& p, double gamma);

// Pr[recall >= gamma] from the masses of S and its complement.
double success_prob_recall(const ProbMass& p_in, const ProbMass& p_out, double gamma);

// E[count/k]; k = |S| >= 1.
double expected_precision(const ProbMass& p, size_t set_size);

// E[j/(j+k)] with the 0/0 case worth 1 (vacuous recall).
double expected_recall(const ProbMass& p_in, const ProbMass& p_out);

}  // namespace oraq::pbd

#endif  // ORAQ_PBD_HPP
