#ifndef STRONGCHAIN_MINING_HPP
#define STRONGCHAIN_MINING_HPP

#include <optional>

#include "strongchain/block.hpp"
#include "strongchain/rng.hpp"

namespace strongchain {

struct MinerIdentity {
    Address address{};
    double hash_share = 0.0;  // alpha
};

enum class MiningEventKind { StrongFound, WeakFound };

struct MiningEvent {
    double time = 0.0;  // absolute sim-clock seconds
    size_t finder = 0;  // index into the miner list
    MiningEventKind kind = MiningEventKind::StrongFound;
};

// Template for grind_block: everything but the winning nonce/weak set.
struct BlockTemplate {
    Hash256 prev_hash{};
    Address coinbase{};
    uint32_t timestamp = 0;
    std::vector<Bytes> transactions;  // without the binding transaction
};

enum class GrindStatus { Strong, Exhausted };

struct GrindResult {
    GrindStatus status = GrindStatus::Exhausted;
    std::optional<Block> block;                 // set when status == Strong
    std::vector<CompressedWeakHeader> weak_headers;  // weak hits collected, in order
    uint64_t hashes_tried = 0;
};

// Iterates the nonce from 0, collecting weak hits into the growing weak set
// (rebinding the block template each time) until a strong hit or budget
// exhaustion.
GrindResult grind_block(const BlockTemplate& tmpl, const ProtocolParams& params,
                        uint64_t nonce_budget);

// Stochastic mining oracle for the simulator. Hash hits (weak band or better)
// arrive Exponential(total_rate); the finder is sampled proportional to hash
// share and a hit is strong with probability T_s/T_w.
class MiningOracle {
public:
    // total_rate: weak-band hits per second across all miners
    // (eta * p_w, chosen so strong hits average one per block interval).
    MiningOracle(std::vector<MinerIdentity> miners, double strong_given_hit,
                 double total_rate, uint64_t seed);

    MiningEvent next_event();
    double now() const { return now_; }

private:
    std::vector<MinerIdentity> miners_;
    std::vector<double> cumulative_share_;
    double strong_given_hit_;
    double total_rate_;
    double now_ = 0.0;
    Xoshiro256 rng_;
};

// Convenience: oracle parametrized by protocol targets, strong blocks every
// target_block_interval seconds on average.
MiningOracle make_oracle(const std::vector<MinerIdentity>& miners,
                         const ProtocolParams& params, uint64_t seed);

}  // namespace strongchain

#endif
