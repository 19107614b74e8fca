#ifndef STRONGCHAIN_PARAMS_HPP
#define STRONGCHAIN_PARAMS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>

#include "strongchain/bytes.hpp"

namespace strongchain {

using U256 = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Compact target encoding (Bitcoin "nBits").
uint32_t compact_from_target(const U256& target);
U256 target_from_compact(uint32_t bits);

// Interprets a digest as a big-endian 256-bit integer.
U256 hash_to_int(const Hash256& h);

enum class HashClass { Strong, Weak, None };

struct ProtocolParams {
    U256 strong_target;               // T_s
    U256 weak_target;                 // T_w
    U256 max_target;                  // T_max, default 2^224
    Rational gamma;                   // weak-reward weight
    uint64_t block_reward = 1250000000;  // R, atomic subunits (10^8 per unit)
    uint32_t target_block_interval = 600;
    uint32_t retarget_window = 2016;
    uint32_t max_future_drift = 7200;
    uint32_t median_window = 11;
    uint32_t version = 1;

    Rational ratio() const { return Rational(weak_target, strong_target); }  // T_w/T_s

    // c = 1 / (1 + gamma*(ratio-1)/ratio); normalizes expected issuance to R.
    Rational scaling_c() const;

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;

    // Toy parameter set: targets expressed as bit counts below T_max.
    static ProtocolParams toy(unsigned strong_zero_bits, unsigned ratio_log2,
                              const Rational& gamma = Rational(0));
};

HashClass classify_hash(const Hash256& h, const ProtocolParams& params);

}  // namespace strongchain

#endif
