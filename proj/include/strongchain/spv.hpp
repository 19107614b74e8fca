#ifndef STRONGCHAIN_SPV_HPP
#define STRONGCHAIN_SPV_HPP

#include <deque>

#include "strongchain/validation.hpp"

namespace strongchain {

// Light client: keeps only accepted strong headers and their aggregated PoW.
// Weak headers and binding-transaction proofs are verified per update and
// then discarded.
class SpvClient {
public:
    SpvClient(ProtocolParams params, const BlockHeader& genesis);

    struct UpdateResult {
        Verdict verdict = Verdict::Ok;
        Rational pow;  // aggregated PoW of the update's block, on success
    };

    // Verifies a (strong header, weak headers, binding-tx inclusion proof)
    // update extending the current tip.
    UpdateResult verify_update(const BlockHeader& strong,
                               const std::vector<CompressedWeakHeader>& weak_headers,
                               const MerkleProof& bt_proof, uint32_t now);

    const Hash256& tip() const { return tip_hash_; }
    uint32_t height() const { return height_; }
    const Rational& cumulative_pow() const { return cumulative_pow_; }

private:
    ProtocolParams params_;  // targets track the current window
    Hash256 tip_hash_;
    uint32_t height_ = 0;
    uint32_t window_first_ts_ = 0;
    uint32_t tip_timestamp_ = 0;
    Rational cumulative_pow_;
    std::deque<uint32_t> recent_timestamps_;
};

}  // namespace strongchain

#endif
