#include "fastpath/signer.hpp"

namespace fastpath {

namespace {
Digest sig_tag(std::string_view domain, std::uint32_t signer, const Digest& message) {
    return tagged_digest(domain, [&](Encoder& enc) {
        enc.u32(signer);
        enc.digest(message);
    });
}
} // namespace

OwnerSig make_owner_sig(OwnerId signer, const Digest& message) {
    return OwnerSig{signer, message, sig_tag("sig/owner", signer.id, message)};
}

ValidatorSig make_validator_sig(ValidatorId signer, const Digest& message) {
    return ValidatorSig{signer, message, sig_tag("sig/validator", signer.index, message)};
}

bool verify(const OwnerSig& sig) {
    return sig.tag == sig_tag("sig/owner", sig.signer.id, sig.message);
}

bool verify(const ValidatorSig& sig) {
    return sig.tag == sig_tag("sig/validator", sig.signer.index, sig.message);
}

} // namespace fastpath
