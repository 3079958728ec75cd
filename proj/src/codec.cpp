#include "fastpath/codec.hpp"

namespace fastpath {

void Encoder::u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Encoder::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void Encoder::bytes(std::span<const std::uint8_t> data) {
    u64(data.size());
    buf_.insert(buf_.end(), data.begin(), data.end());
}

void Encoder::str(const std::string& s) {
    bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

Digest Encoder::digest_of() const {
    return sha256(std::span<const std::uint8_t>(buf_.data(), buf_.size()));
}

void Decoder::need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw DecodeError("truncated input");
}

std::uint8_t Decoder::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t Decoder::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
    return v;
}

std::uint64_t Decoder::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
    return v;
}

std::vector<std::uint8_t> Decoder::bytes() {
    auto n = u64();
    need(n);
    std::vector<std::uint8_t> out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
}

std::string Decoder::str() {
    auto b = bytes();
    return std::string(b.begin(), b.end());
}

Digest Decoder::digest() {
    need(32);
    Digest d;
    std::copy(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + 32), d.bytes.begin());
    pos_ += 32;
    return d;
}

} // namespace fastpath
