#include "strongchain/rewards.hpp"

namespace strongchain {

static uint64_t floor_to_u64(const Rational& r) {
    U256 q = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
    return static_cast<uint64_t>(q);
}

uint64_t strong_reward_amount(const ProtocolParams& params) {
    return floor_to_u64(params.scaling_c() * Rational(params.block_reward));
}

uint64_t weak_reward_amount(const ProtocolParams& params) {
    return floor_to_u64(params.scaling_c() * params.gamma * Rational(params.block_reward) *
                        Rational(params.strong_target, params.weak_target));
}

std::vector<RewardEntry> compute_block_rewards(const Block& b, uint64_t fees,
                                               const ProtocolParams& params) {
    std::vector<RewardEntry> out;
    out.reserve(b.weak_headers.size() + 2);
    out.push_back({b.header.coinbase, strong_reward_amount(params), RewardKind::Strong});
    if (fees > 0) out.push_back({b.header.coinbase, fees, RewardKind::Fee});
    uint64_t per_weak = weak_reward_amount(params);
    for (const auto& w : b.weak_headers)
        out.push_back({w.coinbase, per_weak, RewardKind::Weak});
    return out;
}

void RewardLedger::apply(const std::vector<RewardEntry>& entries) {
    for (const auto& e : entries) {
        Totals& t = totals_[e.address];
        switch (e.kind) {
            case RewardKind::Strong: t.strong_rewards += e.amount; break;
            case RewardKind::Weak: t.weak_rewards += e.amount; break;
            case RewardKind::Fee: t.fee_rewards += e.amount; break;
        }
        if (e.kind != RewardKind::Fee) total_minted_ += e.amount;
    }
}

const RewardLedger::Totals& RewardLedger::totals(const Address& addr) const {
    static const Totals kZero{};
    auto it = totals_.find(addr);
    return it == totals_.end() ? kZero : it->second;
}

}  // namespace strongchain
