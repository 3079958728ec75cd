#pragma once

#include "fastpath/codec.hpp"
#include "fastpath/digest.hpp"

#include <compare>
#include <cstdint>
#include <string>

namespace fastpath {

struct ValidatorId {
    std::uint32_t index = 0;
    auto operator<=>(const ValidatorId&) const = default;
};

struct OwnerId {
    std::uint32_t id = 0;
    auto operator<=>(const OwnerId&) const = default;
};

// A counter or owned object is named by the digest of its genesis record.
using CounterId = Digest;
using ObjectId = Digest;
using VersionId = Digest;
using TxId = Digest;

struct ObjectKey {
    ObjectId object;
    VersionId version;

    auto operator<=>(const ObjectKey&) const = default;

    void encode(Encoder& enc) const {
        enc.digest(object);
        enc.digest(version);
    }
    static ObjectKey decode(Decoder& dec) {
        ObjectKey k;
        k.object = dec.digest();
        k.version = dec.digest();
        return k;
    }
    std::string render() const { return object.short_hex() + "@" + version.short_hex(); }
};

// Network endpoint of a simulated party.
struct Address {
    enum class Kind : std::uint8_t { validator, user, sequencer };
    Kind kind = Kind::validator;
    std::uint32_t id = 0;

    auto operator<=>(const Address&) const = default;

    static Address validator(ValidatorId v) { return {Kind::validator, v.index}; }
    static Address user(OwnerId u) { return {Kind::user, u.id}; }
    static Address sequencer() { return {Kind::sequencer, 0}; }

    bool is_validator() const { return kind == Kind::validator; }
    bool is_user() const { return kind == Kind::user; }
    ValidatorId as_validator() const { return ValidatorId{id}; }
    OwnerId as_user() const { return OwnerId{id}; }

    void encode(Encoder& enc) const {
        enc.u8(static_cast<std::uint8_t>(kind));
        enc.u32(id);
    }
    std::string render() const;
};

inline std::string Address::render() const {
    switch (kind) {
    case Kind::validator: return "val" + std::to_string(id);
    case Kind::user: return "user" + std::to_string(id);
    case Kind::sequencer: return "seq";
    }
    return "?";
}

} // namespace fastpath
