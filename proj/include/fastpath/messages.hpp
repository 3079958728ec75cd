#pragma once

#include "fastpath/consensus_seq.hpp"
#include "fastpath/owned.hpp"
#include "fastpath/types.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace fastpath {

// User submits a transaction for signing (counter update, conversion or
// owned-object transaction; the node routes on the command).
struct MsgSubmitTx {
    Transaction tx;
};

// Validator's answer to a submission: a signature or an error code.
struct MsgTxResponse {
    TxId tx;
    std::optional<ValidatorSig> sig;
    std::uint8_t bc_error = 0;    // BcError when the counter path answered
    std::uint8_t owned_error = 0; // OwnedError when the owned path answered
};

// Certificate delivery, from users or rebroadcasting validators. The version
// requests backing the transaction's version ride along so the recipient can
// judge it without a pull round trip.
struct MsgSubmitCert {
    Certificate cert;
    std::vector<VersionRequest> supporting_requests;
};

// Version update or merge request, with the certificates and ancestor
// requests the recipient may be missing.
struct MsgVersionRequest {
    VersionRequest req;
    std::vector<Certificate> supporting_certs;
    std::vector<VersionRequest> supporting_requests;
};

struct MsgVersionAck {
    Digest req;
    bool adopted = false;
    std::uint8_t error = 0; // BcError
};

struct MsgUnlockRqt {
    UnlockRqt rqt;
};

struct MsgUnlockVote {
    Digest rqt;
    std::optional<UnlockVote> vote;
    std::uint8_t error = 0; // OwnedError
};

struct MsgEffectSign {
    EffectSign effect;
};

// Submission of an item to the sequencing service.
struct MsgSeqSubmit {
    SeqItem item;
};

using Message = std::variant<MsgSubmitTx, MsgTxResponse, MsgSubmitCert, MsgVersionRequest,
                             MsgVersionAck, MsgUnlockRqt, MsgUnlockVote, MsgEffectSign,
                             MsgSeqSubmit>;

// Lower rank delivers first among messages scheduled for the same tick.
// Certificates land before version requests so an update finds its batch.
std::uint8_t message_rank(const Message& msg);
void encode_message(Encoder& enc, const Message& msg);
Digest message_digest(const Message& msg);
const char* message_kind_name(const Message& msg);

struct Envelope {
    Address from;
    Address to;
    Message payload;
};

struct Outbound {
    Address to;
    Message payload;
};

} // namespace fastpath
