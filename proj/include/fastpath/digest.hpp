#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>

namespace fastpath {

// 32-byte content address. Every protocol artifact (transaction, version
// request, certificate, ...) is identified by the digest of its canonical
// encoding.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;

    bool is_zero() const;
    std::string hex() const;
    // First 4 bytes as hex, for log rendering.
    std::string short_hex() const;

    static Digest from_hex(const std::string& hex);
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(const std::string& data);

} // namespace fastpath
