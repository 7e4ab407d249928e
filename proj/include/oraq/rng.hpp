#ifndef ORAQ_RNG_HPP
#define ORAQ_RNG_HPP

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace oraq {

// splitmix64 step; used for seeding and for deriving per-trial streams.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Independent sub-seed for trial/stage `stream` of a base seed.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
    return splitmix64(s);
}

/**
 * Seeded xoshiro256++ generator.
 *
 * All randomized code in this project draws through this class so that a run
 * is reproducible byte-for-byte from its seed, independent of the standard
 * library's engine and distribution implementations.
 */
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n); n >= 1.
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    // Box-Muller, one value per call.
    double normal(double mu, double sigma) {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        return mu + sigma * z;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

/**
 * Draws of `count` distinct values from a fixed population via partial
 * Fisher-Yates. The swaps are undone after each draw, so one buffer serves
 * any number of independent draws without re-initialisation.
 */
class DistinctSampler {
public:
    explicit DistinctSampler(size_t population) : pool_(population) {
        for (size_t i = 0; i < population; ++i) pool_[i] = static_cast<uint32_t>(i);
    }

    // Appends `count` distinct values from [0, population) to `out`.
    void draw(size_t count, Rng& rng, std::vector<uint32_t>& out) {
        const size_t n = pool_.size();
        swaps_.clear();
        for (size_t i = 0; i < count; ++i) {
            const size_t j = i + static_cast<size_t>(rng.below(n - i));
            std::swap(pool_[i], pool_[j]);
            swaps_.emplace_back(i, j);
            out.push_back(pool_[i]);
        }
        for (size_t i = swaps_.size(); i-- > 0;) std::swap(pool_[swaps_[i].first], pool_[swaps_[i].second]);
    }

private:
    std::vector<uint32_t> pool_;
    std::vector<std::pair<size_t, size_t>> swaps_;
};

}  // namespace oraq

#endif  // ORAQ_RNG_HPP
