#pragma once

#include "fastpath/digest.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastpath {

// Canonical binary encoding: little-endian fixed-width integers,
// u64-length-prefixed byte strings, containers written in their sorted
// iteration order. The same bytes come out for the same value on every
// run, which is what makes content digests and trace comparisons stable.
class Encoder {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void boolean(bool v) { u8(v ? 1 : 0); }
    void bytes(std::span<const std::uint8_t> data);
    void str(const std::string& s);
    void digest(const Digest& d) { buf_.insert(buf_.end(), d.bytes.begin(), d.bytes.end()); }

    template <typename T, typename Fn>
    void seq(const std::vector<T>& items, Fn&& encode_one) {
        u64(items.size());
        for (const auto& it : items) encode_one(*this, it);
    }
    template <typename T, typename Fn>
    void seq(const std::set<T>& items, Fn&& encode_one) {
        u64(items.size());
        for (const auto& it : items) encode_one(*this, it);
    }
    template <typename K, typename V, typename Fn>
    void seq(const std::map<K, V>& items, Fn&& encode_one) {
        u64(items.size());
        for (const auto& it : items) encode_one(*this, it);
    }
    template <typename T, typename Fn>
    void opt(const std::optional<T>& v, Fn&& encode_one) {
        boolean(v.has_value());
        if (v) encode_one(*this, *v);
    }

    const std::vector<std::uint8_t>& data() const { return buf_; }
    Digest digest_of() const;

private:
    std::vector<std::uint8_t> buf_;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Decoder {
public:
    explicit Decoder(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    bool boolean() { return u8() != 0; }
    std::vector<std::uint8_t> bytes();
    std::string str();
    Digest digest();

    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n) const;
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

// Digest of a canonical encoding prefixed with a per-type tag, so digests
// of different message kinds never collide structurally.
template <typename Fn>
Digest tagged_digest(std::string_view tag, Fn&& encode_body) {
    Encoder enc;
    enc.str(std::string(tag));
    encode_body(enc);
    return enc.digest_of();
}

} // namespace fastpath
