#ifndef STRONGCHAIN_RNG_HPP
#define STRONGCHAIN_RNG_HPP

#include <cmath>
#include <cstdint>

namespace strongchain {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256++: seedable, portable, with stable cross-platform streams.
// Distinct stream ids on the same seed give independent streams.
class Xoshiro256 {
public:
    explicit Xoshiro256(uint64_t seed, uint64_t stream = 0) {
        uint64_t sm = seed ^ (0x6a09e667f3bcc909ull * (stream + 1));
        for (auto& s : s_) s = splitmix64(sm);
    }

    uint64_t next() {
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

    // Uniform in (0, 1]; never returns 0, so log() is always finite.
    double uniform01() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform01()) / rate; }

    // Weibull with the given shape; scale derived from the mean via
    // mean = scale * Gamma(1 + 1/shape).
    double weibull(double shape, double scale) {
        return scale * std::pow(-std::log(uniform01()), 1.0 / shape);
    }

    bool bernoulli(double p) { return uniform01() <= p; }

    // Uniform integer in [0, n)
    uint64_t below(uint64_t n) { return next() % n; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

inline double weibull_scale_from_mean(double mean, double shape) {
    return mean / std::tgamma(1.0 + 1.0 / shape);
}

}  // namespace strongchain

#endif
