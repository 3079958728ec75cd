#include "fastpath/messages.hpp"

namespace fastpath {

std::uint8_t message_rank(const Message& msg) {
    return static_cast<std::uint8_t>(msg.index());
}

void encode_message(Encoder& enc, const Message& msg) {
    enc.u8(static_cast<std::uint8_t>(msg.index()));
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MsgSubmitTx>) {
                m.tx.encode(enc);
            } else if constexpr (std::is_same_v<T, MsgTxResponse>) {
                enc.digest(m.tx);
                enc.opt(m.sig, [](Encoder& e, const ValidatorSig& s) { s.encode(e); });
                enc.u8(m.bc_error);
                enc.u8(m.owned_error);
            } else if constexpr (std::is_same_v<T, MsgSubmitCert>) {
                m.cert.encode(enc);
                enc.seq(m.supporting_requests,
                        [](Encoder& e, const VersionRequest& r) { r.encode(e); });
            } else if constexpr (std::is_same_v<T, MsgVersionRequest>) {
                m.req.encode(enc);
                enc.seq(m.supporting_certs, [](Encoder& e, const Certificate& c) { c.encode(e); });
                enc.seq(m.supporting_requests,
                        [](Encoder& e, const VersionRequest& r) { r.encode(e); });
            } else if constexpr (std::is_same_v<T, MsgVersionAck>) {
                enc.digest(m.req);
                enc.boolean(m.adopted);
                enc.u8(m.error);
            } else if constexpr (std::is_same_v<T, MsgUnlockRqt>) {
                m.rqt.encode(enc);
            } else if constexpr (std::is_same_v<T, MsgUnlockVote>) {
                enc.digest(m.rqt);
                enc.opt(m.vote, [](Encoder& e, const UnlockVote& v) { v.encode(e); });
                enc.u8(m.error);
            } else if constexpr (std::is_same_v<T, MsgEffectSign>) {
                m.effect.encode(enc);
            } else if constexpr (std::is_same_v<T, MsgSeqSubmit>) {
                enc.digest(m.item.identity());
            }
        },
        msg);
}

Digest message_digest(const Message& msg) {
    return tagged_digest("msg", [&](Encoder& enc) { encode_message(enc, msg); });
}

const char* message_kind_name(const Message& msg) {
    switch (msg.index()) {
    case 0: return "submit-tx";
    case 1: return "tx-response";
    case 2: return "submit-cert";
    case 3: return "version-request";
    case 4: return "version-ack";
    case 5: return "unlock-rqt";
    case 6: return "unlock-vote";
    case 7: return "effect-sign";
    case 8: return "seq-submit";
    }
    return "?";
}

} // namespace fastpath
