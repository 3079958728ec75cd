#pragma once

#include "fastpath/codec.hpp"
#include "fastpath/digest.hpp"
#include "fastpath/ids.hpp"

#include <compare>

namespace fastpath {

// Structural signature: a (signer, message digest) pair plus a binding tag.
// The simulator guarantees unforgeability by construction — honest parties
// only ever emit signatures under their own identity, and the adversary can
// fabricate signatures only for corrupted identities. A real scheme slots in
// by replacing make_*_sig and the verify functions.
struct OwnerSig {
    OwnerId signer;
    Digest message;
    Digest tag; // binds (signer, message) so forgeries are structurally detectable

    auto operator<=>(const OwnerSig&) const = default;

    void encode(Encoder& enc) const {
        enc.u32(signer.id);
        enc.digest(message);
        enc.digest(tag);
    }
    static OwnerSig decode(Decoder& dec) {
        OwnerSig s;
        s.signer.id = dec.u32();
        s.message = dec.digest();
        s.tag = dec.digest();
        return s;
    }
};

struct ValidatorSig {
    ValidatorId signer;
    Digest message;
    Digest tag;

    auto operator<=>(const ValidatorSig&) const = default;

    void encode(Encoder& enc) const {
        enc.u32(signer.index);
        enc.digest(message);
        enc.digest(tag);
    }
    static ValidatorSig decode(Decoder& dec) {
        ValidatorSig s;
        s.signer.index = dec.u32();
        s.message = dec.digest();
        s.tag = dec.digest();
        return s;
    }
};

OwnerSig make_owner_sig(OwnerId signer, const Digest& message);
ValidatorSig make_validator_sig(ValidatorId signer, const Digest& message);
bool verify(const OwnerSig& sig);
bool verify(const ValidatorSig& sig);

} // namespace fastpath
