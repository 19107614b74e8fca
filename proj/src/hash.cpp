#include "strongchain/hash.hpp"

#include <openssl/sha.h>

#include <stdexcept>

namespace strongchain {

Hash256 sha256(std::span<const uint8_t> data) {
    Hash256 out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Hash256 dsha256(std::span<const uint8_t> data) {
    Hash256 first = sha256(data);
    return sha256(std::span<const uint8_t>(first.data(), first.size()));
}

static Hash256 hash_pair(const Hash256& a, const Hash256& b) {
    std::array<uint8_t, 64> buf;
    std::copy(a.begin(), a.end(), buf.begin());
    std::copy(b.begin(), b.end(), buf.begin() + 32);
    return dsha256(std::span<const uint8_t>(buf.data(), buf.size()));
}

Hash256 merkle_root(std::vector<Hash256> leaves) {
    if (leaves.empty()) return Hash256{};
    while (leaves.size() > 1) {
        if (leaves.size() % 2 == 1) leaves.push_back(leaves.back());
        std::vector<Hash256> next;
        next.reserve(leaves.size() / 2);
        for (size_t i = 0; i < leaves.size(); i += 2)
            next.push_back(hash_pair(leaves[i], leaves[i + 1]));
        leaves = std::move(next);
    }
    return leaves[0];
}

MerkleProof merkle_proof(const std::vector<Hash256>& leaves, uint64_t index) {
    if (index >= leaves.size()) throw std::out_of_range("merkle_proof: leaf index out of range");
    MerkleProof proof;
    proof.leaf_index = index;
    std::vector<Hash256> level = leaves;
    uint64_t pos = index;
    while (level.size() > 1) {
        if (level.size() % 2 == 1) level.push_back(level.back());
        uint64_t sibling = pos ^ 1;
        proof.siblings.push_back(level[sibling]);
        std::vector<Hash256> next;
        next.reserve(level.size() / 2);
        for (size_t i = 0; i < level.size(); i += 2)
            next.push_back(hash_pair(level[i], level[i + 1]));
        level = std::move(next);
        pos >>= 1;
    }
    return proof;
}

Hash256 merkle_proof_root(const Hash256& leaf, const MerkleProof& proof) {
    Hash256 node = leaf;
    uint64_t pos = proof.leaf_index;
    for (const Hash256& sibling : proof.siblings) {
        node = (pos & 1) ? hash_pair(sibling, node) : hash_pair(node, sibling);
        pos >>= 1;
    }
    return node;
}

std::string to_hex(const uint8_t* data, size_t size) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(size * 2);
    for (size_t i = 0; i < size; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xf]);
    }
    return out;
}

static int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex character");
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<uint8_t>(hex_val(hex[i]) << 4 | hex_val(hex[i + 1])));
    return out;
}

}  // namespace strongchain
