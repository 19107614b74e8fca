#ifndef STRONGCHAIN_BYTES_HPP
#define STRONGCHAIN_BYTES_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace strongchain {

using Bytes = std::vector<uint8_t>;
using Hash256 = std::array<uint8_t, 32>;
using Address = std::array<uint8_t, 20>;

inline void put_u32le(Bytes& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 24));
}

inline uint32_t get_u32le(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

// Bitcoin-style varint (compact size).
inline void put_varint(Bytes& out, uint64_t v) {
    if (v < 0xfd) {
        out.push_back(static_cast<uint8_t>(v));
    } else if (v <= 0xffff) {
        out.push_back(0xfd);
        out.push_back(static_cast<uint8_t>(v));
        out.push_back(static_cast<uint8_t>(v >> 8));
    } else if (v <= 0xffffffffull) {
        out.push_back(0xfe);
        put_u32le(out, static_cast<uint32_t>(v));
    } else {
        out.push_back(0xff);
        put_u32le(out, static_cast<uint32_t>(v));
        put_u32le(out, static_cast<uint32_t>(v >> 32));
    }
}

class ByteReader {
public:
    ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
    explicit ByteReader(const Bytes& b) : data_(b.data()), size_(b.size()) {}

    size_t remaining() const { return size_ - pos_; }

    const uint8_t* take(size_t n) {
        if (remaining() < n) throw std::out_of_range("ByteReader: truncated input");
        const uint8_t* p = data_ + pos_;
        pos_ += n;
        return p;
    }

    uint32_t u32le() { return get_u32le(take(4)); }

    uint64_t varint() {
        uint8_t tag = *take(1);
        if (tag < 0xfd) return tag;
        if (tag == 0xfd) {
            const uint8_t* p = take(2);
            return static_cast<uint64_t>(p[0]) | static_cast<uint64_t>(p[1]) << 8;
        }
        if (tag == 0xfe) return get_u32le(take(4));
        const uint8_t* p = take(8);
        return static_cast<uint64_t>(get_u32le(p)) | static_cast<uint64_t>(get_u32le(p + 4)) << 32;
    }

    template <size_t N>
    std::array<uint8_t, N> bytes() {
        std::array<uint8_t, N> out;
        std::memcpy(out.data(), take(N), N);
        return out;
    }

private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

std::string to_hex(const uint8_t* data, size_t size);

template <size_t N>
std::string to_hex(const std::array<uint8_t, N>& a) {
    return to_hex(a.data(), N);
}
inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }

Bytes from_hex(const std::string& hex);

template <size_t N>
std::array<uint8_t, N> array_from_hex(const std::string& hex) {
    Bytes b = from_hex(hex);
    if (b.size() != N) throw std::invalid_argument("hex string has wrong length");
    std::array<uint8_t, N> out;
    std::memcpy(out.data(), b.data(), N);
    return out;
}

}  // namespace strongchain

#endif
