#include "strongchain/mining.hpp"

#include <algorithm>

namespace strongchain {

GrindResult grind_block(const BlockTemplate& tmpl, const ProtocolParams& params,
                        uint64_t nonce_budget) {
    GrindResult result;

    Block b;
    b.header.version = params.version;
    b.header.prev_hash = tmpl.prev_hash;
    b.header.timestamp = tmpl.timestamp;
    b.header.target_bits = compact_from_target(params.strong_target);
    b.header.coinbase = tmpl.coinbase;
    b.transactions.reserve(tmpl.transactions.size() + 1);
    b.transactions.emplace_back();  // binding slot
    for (const auto& tx : tmpl.transactions) b.transactions.push_back(tx);
    rebind_block(b);

    for (uint64_t nonce = 0; nonce < nonce_budget; ++nonce) {
        b.header.nonce = static_cast<uint32_t>(nonce);
        ++result.hashes_tried;
        Hash256 h = b.header.hash();
        HashClass cls = classify_hash(h, params);
        if (cls == HashClass::Strong) {
            result.status = GrindStatus::Strong;
            result.block = b;
            return result;
        }
        if (cls == HashClass::Weak) {
            CompressedWeakHeader w = CompressedWeakHeader::compress(b.header);
            result.weak_headers.push_back(w);
            b.weak_headers.push_back(w);
            rebind_block(b);  // the weak set changed; recommit
        }
    }
    result.status = GrindStatus::Exhausted;
    return result;
}

MiningOracle::MiningOracle(std::vector<MinerIdentity> miners, double strong_given_hit,
                           double total_rate, uint64_t seed)
    : miners_(std::move(miners)),
      strong_given_hit_(strong_given_hit),
      total_rate_(total_rate),
      rng_(seed) {
    if (total_rate_ <= 0) throw std::invalid_argument("oracle rate must be positive");
    double acc = 0;
    for (const auto& m : miners_) {
        acc += m.hash_share;
        cumulative_share_.push_back(acc);
    }
    if (cumulative_share_.empty() || std::abs(acc - 1.0) > 1e-9)
        throw std::invalid_argument("hash shares must sum to 1");
    cumulative_share_.back() = 1.0;
}

MiningEvent MiningOracle::next_event() {
    now_ += rng_.exponential(total_rate_);
    MiningEvent e;
    e.time = now_;
    double u = rng_.uniform01();
    e.finder = std::lower_bound(cumulative_share_.begin(), cumulative_share_.end(), u) -
               cumulative_share_.begin();
    if (e.finder >= miners_.size()) e.finder = miners_.size() - 1;
    e.kind = rng_.bernoulli(strong_given_hit_) ? MiningEventKind::StrongFound
                                               : MiningEventKind::WeakFound;
    return e;
}

MiningOracle make_oracle(const std::vector<MinerIdentity>& miners,
                         const ProtocolParams& params, uint64_t seed) {
    double p = static_cast<double>(Rational(params.strong_target, params.weak_target));
    // eta * p_w chosen so eta * p_s = 1 / target_block_interval.
    double total_rate = 1.0 / (params.target_block_interval * p);
    return MiningOracle(miners, p, total_rate, seed);
}

}  // namespace strongchain
