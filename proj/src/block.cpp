#include "strongchain/block.hpp"

namespace strongchain {

Bytes Block::serialize() const {
    Bytes out = header.serialize();
    put_varint(out, weak_headers.size());
    for (const auto& w : weak_headers) {
        Bytes wb = w.serialize();
        out.insert(out.end(), wb.begin(), wb.end());
    }
    put_varint(out, transactions.size());
    for (const auto& tx : transactions) {
        put_varint(out, tx.size());
        out.insert(out.end(), tx.begin(), tx.end());
    }
    return out;
}

Block Block::deserialize(const Bytes& b) {
    ByteReader r(b);
    Block block;
    block.header = BlockHeader::deserialize(r);
    uint64_t n_weak = r.varint();
    block.weak_headers.reserve(n_weak);
    for (uint64_t i = 0; i < n_weak; ++i)
        block.weak_headers.push_back(CompressedWeakHeader::deserialize(r));
    uint64_t n_tx = r.varint();
    block.transactions.reserve(n_tx);
    for (uint64_t i = 0; i < n_tx; ++i) {
        uint64_t len = r.varint();
        const uint8_t* p = r.take(len);
        block.transactions.emplace_back(p, p + len);
    }
    if (r.remaining() != 0) throw std::invalid_argument("trailing bytes after block");
    return block;
}

Hash256 binding_commitment_unchecked(const std::vector<CompressedWeakHeader>& weak_headers,
                                     const BlockHeader& strong_ctx) {
    Bytes concat;
    concat.reserve(weak_headers.size() * kHeaderSize);
    for (const auto& w : weak_headers) {
        Bytes full = w.decompress(strong_ctx).serialize();
        concat.insert(concat.end(), full.begin(), full.end());
    }
    return dsha256(std::span<const uint8_t>(concat.data(), concat.size()));
}

Hash256 binding_commitment(const std::vector<CompressedWeakHeader>& weak_headers,
                           const BlockHeader& strong_ctx, const ProtocolParams& params) {
    for (size_t i = 0; i < weak_headers.size(); ++i) {
        Hash256 h = weak_headers[i].decompress(strong_ctx).hash();
        if (classify_hash(h, params) != HashClass::Weak) throw DecompressionMismatch(i);
    }
    return binding_commitment_unchecked(weak_headers, strong_ctx);
}

Bytes make_binding_transaction(const Hash256& commitment) {
    Bytes tx;
    tx.reserve(33);
    tx.push_back(kBindingMarker);
    tx.insert(tx.end(), commitment.begin(), commitment.end());
    return tx;
}

std::optional<Hash256> parse_binding_transaction(const Bytes& tx) {
    if (tx.size() != 33 || tx[0] != kBindingMarker) return std::nullopt;
    Hash256 out;
    std::copy(tx.begin() + 1, tx.end(), out.begin());
    return out;
}

Hash256 transactions_root(const std::vector<Bytes>& transactions) {
    std::vector<Hash256> leaves;
    leaves.reserve(transactions.size());
    for (const auto& tx : transactions)
        leaves.push_back(dsha256(std::span<const uint8_t>(tx.data(), tx.size())));
    return merkle_root(std::move(leaves));
}

void rebind_block(Block& b) {
    Hash256 commitment = binding_commitment_unchecked(b.weak_headers, b.header);
    Bytes binding = make_binding_transaction(commitment);
    if (b.transactions.empty()) {
        b.transactions.push_back(std::move(binding));
    } else {
        b.transactions[0] = std::move(binding);
    }
    b.header.tx_root = transactions_root(b.transactions);
}

Rational block_pow(size_t n_weak, const U256& strong_target, const U256& weak_target,
                   const U256& max_target) {
    return Rational(max_target, strong_target) +
           Rational(n_weak) * Rational(max_target, weak_target);
}

Rational block_pow(const Block& b, const ProtocolParams& params) {
    return block_pow(b.weak_headers.size(), params.strong_target, params.weak_target,
                     params.max_target);
}

double effective_timestamp(const Block& b, const ProtocolParams& params) {
    Rational w(params.strong_target, params.weak_target);
    Rational sum_t(b.header.timestamp);
    Rational sum_w(1);
    for (const auto& weak : b.weak_headers) {
        sum_t += w * Rational(weak.timestamp);
        sum_w += w;
    }
    return static_cast<double>(Rational(sum_t / sum_w));
}

}  // namespace strongchain
