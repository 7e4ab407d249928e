#ifndef ORAQ_PQE_HPP
#define ORAQ_PQE_HPP

#include "oraq/core.hpp"

namespace oraq {

// Zero-mean normal noise model for the proxy-to-oracle deviation.
struct NoiseModel {
    double mu = 0.0;
    double sigma = 0.0;  // > 0

    double cdf(double x) const;
};

// High-accuracy standard normal CDF (erfc-based; cdf(0) == 0.5 exactly).
double standard_normal_cdf(double z);

/**
 * Probes `budget` uniformly sampled distinct objects and fits
 * sigma = sigma0 + population std of the residuals dist^O - dist^P.
 * budget == 0 skips probing and requires sigma0 > 0.
 */
NoiseModel estimate_noise_scale(const Dataset& ds, size_t budget, double sigma0, const OracleFn& oracle,
                                OracleLedger& ledger, uint64_t seed);

// Calibrates the noise model from samples, then answers via pqa on the
// fitted membership probabilities. Heuristic: no success guarantee.
Answer pqe(const Dataset& ds, const Query& q, size_t budget, double sigma0, const OracleFn& oracle,
           OracleLedger& ledger, uint64_t seed);

}  // namespace oraq

#endif  // ORAQ_PQE_HPP
