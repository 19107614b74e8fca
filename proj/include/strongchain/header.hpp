#ifndef STRONGCHAIN_HEADER_HPP
#define STRONGCHAIN_HEADER_HPP

#include <compare>

#include "strongchain/bytes.hpp"
#include "strongchain/hash.hpp"
#include "strongchain/params.hpp"

namespace strongchain {

constexpr size_t kHeaderSize = 100;
constexpr size_t kCompressedWeakHeaderSize = 60;

// The 100-byte header shared by strong and weak headers: Bitcoin's 80-byte
// layout plus a 20-byte Coinbase address, little-endian integers.
struct BlockHeader {
    uint32_t version = 1;
    Hash256 prev_hash{};
    Hash256 tx_root{};
    uint32_t timestamp = 0;
    uint32_t target_bits = 0;
    uint32_t nonce = 0;
    Address coinbase{};

    bool operator==(const BlockHeader&) const = default;

    Bytes serialize() const;
    static BlockHeader deserialize(ByteReader& r);
    static BlockHeader deserialize(const Bytes& b);

    Hash256 hash() const;
};

// Weak header with the fields shared with the enclosing strong header
// (version, prev_hash, target_bits) elided; 60 bytes on the wire.
struct CompressedWeakHeader {
    Hash256 tx_root{};
    uint32_t timestamp = 0;
    uint32_t nonce = 0;
    Address coinbase{};

    bool operator==(const CompressedWeakHeader&) const = default;

    Bytes serialize() const;
    static CompressedWeakHeader deserialize(ByteReader& r);
    static CompressedWeakHeader deserialize(const Bytes& b);

    // Reconstructs the full 100-byte header against the enclosing strong header.
    BlockHeader decompress(const BlockHeader& strong_ctx) const;

    static CompressedWeakHeader compress(const BlockHeader& full);
};

}  // namespace strongchain

#endif
