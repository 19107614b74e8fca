#include "strongchain/header.hpp"

namespace strongchain {

Bytes BlockHeader::serialize() const {
    Bytes out;
    out.reserve(kHeaderSize);
    put_u32le(out, version);
    out.insert(out.end(), prev_hash.begin(), prev_hash.end());
    out.insert(out.end(), tx_root.begin(), tx_root.end());
    put_u32le(out, timestamp);
    put_u32le(out, target_bits);
    put_u32le(out, nonce);
    out.insert(out.end(), coinbase.begin(), coinbase.end());
    return out;
}

BlockHeader BlockHeader::deserialize(ByteReader& r) {
    BlockHeader h;
    h.version = r.u32le();
    h.prev_hash = r.bytes<32>();
    h.tx_root = r.bytes<32>();
    h.timestamp = r.u32le();
    h.target_bits = r.u32le();
    h.nonce = r.u32le();
    h.coinbase = r.bytes<20>();
    return h;
}

BlockHeader BlockHeader::deserialize(const Bytes& b) {
    ByteReader r(b);
    BlockHeader h = deserialize(r);
    if (r.remaining() != 0) throw std::invalid_argument("trailing bytes after header");
    return h;
}

Hash256 BlockHeader::hash() const {
    Bytes b = serialize();
    return dsha256(std::span<const uint8_t>(b.data(), b.size()));
}

Bytes CompressedWeakHeader::serialize() const {
    Bytes out;
    out.reserve(kCompressedWeakHeaderSize);
    out.insert(out.end(), tx_root.begin(), tx_root.end());
    put_u32le(out, timestamp);
    put_u32le(out, nonce);
    out.insert(out.end(), coinbase.begin(), coinbase.end());
    return out;
}

CompressedWeakHeader CompressedWeakHeader::deserialize(ByteReader& r) {
    CompressedWeakHeader h;
    h.tx_root = r.bytes<32>();
    h.timestamp = r.u32le();
    h.nonce = r.u32le();
    h.coinbase = r.bytes<20>();
    return h;
}

CompressedWeakHeader CompressedWeakHeader::deserialize(const Bytes& b) {
    ByteReader r(b);
    CompressedWeakHeader h = deserialize(r);
    if (r.remaining() != 0) throw std::invalid_argument("trailing bytes after weak header");
    return h;
}

BlockHeader CompressedWeakHeader::decompress(const BlockHeader& strong_ctx) const {
    BlockHeader h;
    h.version = strong_ctx.version;
    h.prev_hash = strong_ctx.prev_hash;
    h.target_bits = strong_ctx.target_bits;
    h.tx_root = tx_root;
    h.timestamp = timestamp;
    h.nonce = nonce;
    h.coinbase = coinbase;
    return h;
}

CompressedWeakHeader CompressedWeakHeader::compress(const BlockHeader& full) {
    CompressedWeakHeader h;
    h.tx_root = full.tx_root;
    h.timestamp = full.timestamp;
    h.nonce = full.nonce;
    h.coinbase = full.coinbase;
    return h;
}

}  // namespace strongchain
