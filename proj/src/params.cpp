#include "strongchain/params.hpp"

namespace strongchain {

uint32_t compact_from_target(const U256& target) {
    if (target < 0) throw std::invalid_argument("negative target");
    if (target == 0) return 0;
    unsigned bits = boost::multiprecision::msb(target) + 1;
    unsigned size = (bits + 7) / 8;
    uint32_t mantissa;
    if (size <= 3) {
        mantissa = static_cast<uint32_t>(target << 8 * (3 - size));
    } else {
        mantissa = static_cast<uint32_t>(target >> 8 * (size - 3));
    }
    // High bit of the mantissa is a sign flag in the Bitcoin encoding; avoid it.
    if (mantissa & 0x00800000) {
        mantissa >>= 8;
        ++size;
    }
    return mantissa | (static_cast<uint32_t>(size) << 24);
}

U256 target_from_compact(uint32_t bits) {
    uint32_t size = bits >> 24;
    uint32_t mantissa = bits & 0x007fffff;
    if (bits & 0x00800000) throw std::invalid_argument("negative compact target");
    U256 target(mantissa);
    if (size <= 3) {
        target >>= 8 * (3 - size);
    } else {
        target <<= 8 * (size - 3);
    }
    return target;
}

U256 hash_to_int(const Hash256& h) {
    U256 v = 0;
    for (uint8_t b : h) {
        v <<= 8;
        v += b;
    }
    return v;
}

Rational ProtocolParams::scaling_c() const {
    Rational r = ratio();
    return Rational(1) / (Rational(1) + gamma * (r - 1) / r);
}

void ProtocolParams::validate() const {
    if (!(strong_target < weak_target && weak_target <= max_target))
        throw std::invalid_argument("targets must satisfy T_s < T_w <= T_max");
    if (strong_target <= 0) throw std::invalid_argument("T_s must be positive");
    if (gamma < 0) throw std::invalid_argument("gamma must be nonnegative");
    if (retarget_window < 1) throw std::invalid_argument("retarget_window must be >= 1");
    if (target_block_interval == 0) throw std::invalid_argument("target_block_interval must be positive");
    Rational c = scaling_c();
    if (!(c > 0 && c <= 1)) throw std::invalid_argument("scaling constant c out of (0, 1]");
}

ProtocolParams ProtocolParams::toy(unsigned strong_zero_bits, unsigned ratio_log2,
                                   const Rational& gamma) {
    ProtocolParams p;
    // Grindable in-process: probabilities are relative to the 256-bit hash
    // space, so a small strong_zero_bits means a few thousand hash attempts.
    p.max_target = U256(1) << 255;
    p.strong_target = p.max_target >> strong_zero_bits;
    p.weak_target = p.strong_target << ratio_log2;
    if (p.weak_target > p.max_target) p.weak_target = p.max_target;
    if (p.weak_target == p.strong_target) p.weak_target = p.strong_target + 1;
    p.gamma = gamma;
    return p;
}

HashClass classify_hash(const Hash256& h, const ProtocolParams& params) {
    U256 v = hash_to_int(h);
    if (v < params.strong_target) return HashClass::Strong;
    if (v < params.weak_target) return HashClass::Weak;
    return HashClass::None;
}

}  // namespace strongchain
