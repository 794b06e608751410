#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tracemix {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

inline Bytes to_bytes(const std::string& s) {
    return Bytes(s.begin(), s.end());
}

inline void append(Bytes& out, BytesView more) {
    out.insert(out.end(), more.begin(), more.end());
}

inline void append_u8(Bytes& out, uint8_t v) { out.push_back(v); }

inline void append_u32(Bytes& out, uint32_t v) {
    for (int i = 3; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void append_u64(Bytes& out, uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

// Length-prefixed framing used inside hash transcripts so that
// concatenations of variable-length fields stay injective.
inline void append_framed(Bytes& out, BytesView field) {
    append_u32(out, static_cast<uint32_t>(field.size()));
    append(out, field);
}

inline void append_framed(Bytes& out, const std::string& field) {
    append_u32(out, static_cast<uint32_t>(field.size()));
    out.insert(out.end(), field.begin(), field.end());
}

inline std::string to_hex(BytesView b) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(b.size() * 2);
    for (uint8_t x : b) {
        s.push_back(digits[x >> 4]);
        s.push_back(digits[x & 0xf]);
    }
    return s;
}

// Simple cursor for decoding length-prefixed records; reports the byte
// offset of any malformed field.
class ByteReader {
public:
    explicit ByteReader(BytesView data) : data_(data) {}

    size_t offset() const { return pos_; }
    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }

    uint8_t read_u8() {
        need(1);
        return data_[pos_++];
    }
    uint32_t read_u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }
    uint64_t read_u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }
    Bytes read_raw(size_t n) {
        need(n);
        Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }
    Bytes read_framed() {
        uint32_t n = read_u32();
        return read_raw(n);
    }

private:
    void need(size_t n) {
        if (remaining() < n) {
            throw std::runtime_error("truncated input at byte offset " + std::to_string(pos_));
        }
    }

    BytesView data_;
    size_t pos_ = 0;
};

}  // namespace tracemix
