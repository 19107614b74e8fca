#ifndef STRONGCHAIN_HASH_HPP
#define STRONGCHAIN_HASH_HPP

#include <span>
#include <vector>

#include "strongchain/bytes.hpp"

namespace strongchain {

Hash256 sha256(std::span<const uint8_t> data);

// Double SHA-256, the hash used for headers, transactions and Merkle nodes.
Hash256 dsha256(std::span<const uint8_t> data);

// Merkle root over a list of leaf hashes; odd levels duplicate the last node.
// An empty leaf list yields the all-zero root.
Hash256 merkle_root(std::vector<Hash256> leaves);

struct MerkleProof {
    uint64_t leaf_index = 0;
    std::vector<Hash256> siblings;  // bottom-up
};

// Proof for leaves[index] in the same duplicate-last-leaf tree as merkle_root.
MerkleProof merkle_proof(const std::vector<Hash256>& leaves, uint64_t index);

// Recomputes the root implied by (leaf, proof).
Hash256 merkle_proof_root(const Hash256& leaf, const MerkleProof& proof);

}  // namespace strongchain

#endif
