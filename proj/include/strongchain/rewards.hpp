#ifndef STRONGCHAIN_REWARDS_HPP
#define STRONGCHAIN_REWARDS_HPP

#include <map>
#include <vector>

#include "strongchain/block.hpp"

namespace strongchain {

enum class RewardKind { Strong, Weak, Fee };

struct RewardEntry {
    Address address;
    uint64_t amount = 0;  // atomic subunits
    RewardKind kind = RewardKind::Strong;
};

// Strong finder gets floor(c*R) + fees; each weak header's coinbase gets
// floor(c*gamma*R*T_s/T_w). Fractions round down; the remainder stays
// unminted.
std::vector<RewardEntry> compute_block_rewards(const Block& b, uint64_t fees,
                                               const ProtocolParams& params);

uint64_t strong_reward_amount(const ProtocolParams& params);
uint64_t weak_reward_amount(const ProtocolParams& params);

// Per-address accumulated rewards split by kind.
class RewardLedger {
public:
    void apply(const std::vector<RewardEntry>& entries);

    struct Totals {
        uint64_t strong_rewards = 0;
        uint64_t weak_rewards = 0;
        uint64_t fee_rewards = 0;
        uint64_t total() const { return strong_rewards + weak_rewards + fee_rewards; }
    };

    const Totals& totals(const Address& addr) const;
    const std::map<Address, Totals>& all() const { return totals_; }
    uint64_t total_minted() const { return total_minted_; }

private:
    std::map<Address, Totals> totals_;
    uint64_t total_minted_ = 0;
};

}  // namespace strongchain

#endif
