#ifndef STRONGCHAIN_BLOCK_HPP
#define STRONGCHAIN_BLOCK_HPP

#include <optional>
#include <vector>

#include "strongchain/header.hpp"

namespace strongchain {

constexpr uint8_t kBindingMarker = 0x6a;  // mirrors OP_RETURN

struct Block {
    BlockHeader header;
    std::vector<CompressedWeakHeader> weak_headers;
    std::vector<Bytes> transactions;  // transactions[0] is the binding transaction

    bool operator==(const Block&) const = default;

    // header || varint(n_weak) || weak headers || varint(n_tx) || length-prefixed txs
    Bytes serialize() const;
    static Block deserialize(const Bytes& b);
};

// H over the concatenated 100-byte decompressed weak headers, in list order.
// The unchecked variant never fails; the checked one verifies each weak
// header's reconstructed hash against the weak band first.
Hash256 binding_commitment_unchecked(const std::vector<CompressedWeakHeader>& weak_headers,
                                     const BlockHeader& strong_ctx);

struct DecompressionMismatch : std::runtime_error {
    explicit DecompressionMismatch(size_t index)
        : std::runtime_error("weak header " + std::to_string(index) +
                             " violates the weak target band"),
          index(index) {}
    size_t index;
};

Hash256 binding_commitment(const std::vector<CompressedWeakHeader>& weak_headers,
                           const BlockHeader& strong_ctx, const ProtocolParams& params);

// 1-byte marker followed by the 32-byte commitment.
Bytes make_binding_transaction(const Hash256& commitment);
std::optional<Hash256> parse_binding_transaction(const Bytes& tx);

// Merkle root over dsha256 of each transaction's bytes.
Hash256 transactions_root(const std::vector<Bytes>& transactions);

// Rebuilds transactions[0] and tx_root for the given weak set; used by miners.
void rebind_block(Block& b);

// Aggregated PoW: T_max/T_s + n_weak * T_max/T_w.
Rational block_pow(size_t n_weak, const U256& strong_target, const U256& weak_target,
                   const U256& max_target);
Rational block_pow(const Block& b, const ProtocolParams& params);

// PoW-weighted mean timestamp: strong weight 1, weak weight T_s/T_w.
double effective_timestamp(const Block& b, const ProtocolParams& params);

}  // namespace strongchain

#endif
