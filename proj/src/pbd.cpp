#include "oraq/pbd.hpp"

#include <cmath>
#include <stdexcept>

namespace oraq::pbd {

namespace {

#if defined(__x86_64__) || defined(_M_X64)
using accum_t = long double;  // 80-bit extended on x86-64
#else
using accum_t = double;
#endif

void check_phi(double phi) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw std::invalid_argument("membership probability outside [0,1]");
}

double clamp_slack(accum_t v) {
    if (v < 0.0) {
        if (v < -1e-12L) throw std::logic_error("probability mass below numeric slack");
        return 0.0;
    }
    return static_cast<double>(v);
}

}  // namespace

MembershipProbs membership_probs(const Dataset& ds, double radius, const NoiseCdf& noise_cdf) {
    MembershipProbs phis;
    phis.reserve(ds.size());
    for (const auto& rec : ds.by_rank()) {
        double phi = noise_cdf(radius - rec.proxy_dist);
        if (phi < 0.0 && phi >= -1e-12) phi = 0.0;
        if (phi > 1.0 && phi <= 1.0 + 1e-12) phi = 1.0;
        check_phi(phi);
        phis.push_back(phi);
    }
    return phis;
}

void convolve_bernoulli_inplace(ProbMass& p, double phi) {
    check_phi(phi);
    if (p.empty()) throw std::invalid_argument("probability mass must not be empty");
    const size_t n = p.size();
    const accum_t q = 1.0L - static_cast<accum_t>(phi);
    p.push_back(0.0);
    for (size_t k = n; k >= 1; --k)
        p[k] = clamp_slack(static_cast<accum_t>(p[k - 1]) * phi + static_cast<accum_t>(p[k]) * q);
    p[0] = clamp_slack(static_cast<accum_t>(p[0]) * q);
}

ProbMass convolve_bernoulli(const ProbMass& p, double phi) {
    ProbMass out = p;
    convolve_bernoulli_inplace(out, phi);
    return out;
}

ProbMass count_distribution(const MembershipProbs& phis) {
    ProbMass p{1.0};
    p.reserve(phis.size() + 1);
    for (double phi : phis) convolve_bernoulli_inplace(p, phi);
    return p;
}

double success_prob_precision(const ProbMass& p, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be strictly inside (0,1)");
    if (p.empty()) throw std::invalid_argument("probability mass must not be empty");
    const size_t set_size = p.size() - 1;
    const size_t k_min = detail::min_hits_for(set_size, gamma);
    accum_t sum = 0.0;
    for (size_t k = k_min; k <= set_size; ++k) sum += p[k];
    return static_cast<double>(sum);
}

double success_prob_recall(const ProbMass& p_in, const ProbMass& p_out, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be strictly inside (0,1)");
    if (p_in.empty() || p_out.empty()) throw std::invalid_argument("probability mass must not be empty");
    // prefix sums of the complement's mass
    std::vector<accum_t> cum(p_out.size());
    accum_t run = 0.0;
    for (size_t k = 0; k < p_out.size(); ++k) cum[k] = (run += p_out[k]);
    accum_t sum = 0.0;
    for (size_t j = 0; j < p_in.size(); ++j) {
        size_t k_max = detail::max_outside_for(j, gamma);
        if (k_max >= p_out.size()) k_max = p_out.size() - 1;
        sum += static_cast<accum_t>(p_in[j]) * cum[k_max];
    }
    return static_cast<double>(sum);
}

double expected_precision(const ProbMass& p, size_t set_size) {
    if (set_size == 0) throw std::invalid_argument("expected precision undefined for an empty set");
    accum_t sum = 0.0;
    for (size_t j = 1; j < p.size(); ++j) sum += static_cast<accum_t>(p[j]) * j;
    return static_cast<double>(sum / static_cast<accum_t>(set_size));
}

double expected_recall(const ProbMass& p_in, const ProbMass& p_out) {
    if (p_in.empty() || p_out.empty()) throw std::invalid_argument("probability mass must not be empty");
    accum_t sum = static_cast<accum_t>(p_in[0]) * p_out[0];  // 0/0 counts as 1
    for (size_t j = 1; j < p_in.size(); ++j) {
        accum_t inner = 0.0;
        for (size_t k = 0; k < p_out.size(); ++k)
            inner += static_cast<accum_t>(p_out[k]) * (static_cast<accum_t>(j) / static_cast<accum_t>(j + k));
        sum += static_cast<accum_t>(p_in[j]) * inner;
    }
    return static_cast<double>(sum);
}

}  // namespace oraq::pbd
