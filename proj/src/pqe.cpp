#include "oraq/pqe.hpp"

#include <cmath>
#include <stdexcept>

#include "oraq/pbd.hpp"
#include "oraq/pqa.hpp"
#include "oraq/rng.hpp"

namespace oraq {

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

double NoiseModel::cdf(double x) const { return standard_normal_cdf((x - mu) / sigma); }

NoiseModel estimate_noise_scale(const Dataset& ds, size_t budget, double sigma0, const OracleFn& oracle,
                                OracleLedger& ledger, uint64_t seed) {
    if (budget > ds.size()) throw std::out_of_range("noise-estimation budget exceeds dataset size");
    double variance = 0.0;
    if (budget > 0) {
        Rng rng(seed);
        DistinctSampler sampler(ds.size());
        std::vector<uint32_t> picks;
        picks.reserve(budget);
        sampler.draw(budget, rng, picks);
        ProbeCache cache(oracle, ledger);
        std::vector<double> residuals;
        residuals.reserve(budget);
        double mean = 0.0;
        for (uint32_t pos : picks) {
            const auto& rec = ds.by_rank()[pos];
            const double res = cache.dist(rec.id) - rec.proxy_dist;
            residuals.push_back(res);
            mean += res;
        }
        mean /= static_cast<double>(budget);
        for (double res : residuals) variance += (res - mean) * (res - mean);
        variance /= static_cast<double>(budget);  // population, not Bessel-corrected
    }
    NoiseModel model;
    model.sigma = sigma0 + std::sqrt(variance);
    if (!(model.sigma > 0.0)) throw std::invalid_argument("noise scale must be positive; raise sigma0 or budget");
    return model;
}

Answer pqe(const Dataset& ds, const Query& q, size_t budget, double sigma0, const OracleFn& oracle,
           OracleLedger& ledger, uint64_t seed) {
    q.validate();
    const NoiseModel model = estimate_noise_scale(ds, budget, sigma0, oracle, ledger, seed);
    const auto phis = pbd::membership_probs(ds, q.radius, [&model](double x) { return model.cdf(x); });
    Answer a = q.kind == QueryKind::precision_target ? pqa_pt(ds, phis, q.gamma, q.delta)
                                                     : pqa_rt(ds, phis, q.gamma, q.delta);
    a.algorithm = q.kind == QueryKind::precision_target ? "pqe-pt" : "pqe-rt";
    a.oracle_calls = budget;
    return a;
}

}  // namespace oraq
