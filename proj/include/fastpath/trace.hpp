#pragma once

#include "fastpath/committee.hpp"
#include "fastpath/consensus_seq.hpp"
#include "fastpath/owned.hpp"
#include "fastpath/types.hpp"

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fastpath {

enum class TraceKind : std::uint8_t {
    msg_delivered,
    msg_dropped,
    bc_signed,
    bc_sign_rejected,
    cert_formed,
    cert_executed,
    cert_parked,
    cert_rejected,
    version_adopted,
    version_rejected,
    conversion_executed,
    owned_signed,
    owned_sign_rejected,
    owned_executed,
    owned_exec_refused,
    effect_emitted,
    effect_cert_formed,
    unlock_vote_emitted,
    unlock_rejected,
    unlock_db_unlocked,
    unlock_db_confirmed,
    unlock_cert_formed,
    sequenced,
    seq_delivered,
    ucert_processed,
    ucert_skipped,
    undo_performed,
    noop_executed,
    gas_spent,
    consensus_executed,
    consensus_skipped,
    consensus_confirmed_only,
    crashed,
    corrupted,
    epoch_ended,
    demand,
    user_rejected,
    resend,
    truncated,
};

const char* to_string(TraceKind kind);

// One observable step. The payload fields are generic: which digests and
// amounts they carry depends on the kind (see render_text for the mapping).
struct TraceEvent {
    std::uint64_t seq = 0;
    std::uint64_t time = 0;
    TraceKind kind = TraceKind::msg_delivered;
    Address actor;
    Digest a, b, c;
    Quantity amount;
    std::uint32_t extra = 0;

    void encode(Encoder& enc) const;
    static TraceEvent decode(Decoder& dec);
};

// Compact description of a transaction for replay-only oracles.
struct TraceTx {
    std::uint8_t kind = 0; // 0 counter update, 1 owned, 2 conversion
    CounterId counter;
    VersionId version; // counter version or conversion base
    Quantity delta;
    std::vector<ObjectKey> inputs;  // owned path, gas included
    std::vector<ObjectKey> outputs; // owned path
    std::set<OwnerId> signers;
    std::set<TxId> prev_txs; // conversion batch

    static TraceTx from(const Transaction& tx);
    void encode(Encoder& enc) const;
    static TraceTx decode(Decoder& dec);
};

struct TraceRequest {
    CounterId counter;
    VersionId version;
    bool is_update = true;
    std::set<VersionId> parents;
    std::set<TxId> prev_txs;

    static TraceRequest from(const VersionRequest& req);
    void encode(Encoder& enc) const;
    static TraceRequest decode(Decoder& dec);
};

struct TraceSeqItem {
    Digest identity;
    bool is_unlock = false;
    TxId cert_tx;                 // checkpoint path
    Digest rqt;                   // unlock path
    bool no_commit = false;
    std::vector<TxId> embedded;   // certificates inside the unlock cert
    std::vector<ObjectKey> keys;  // keys the item touches
    ObjectKey gas;

    void encode(Encoder& enc) const;
    static TraceSeqItem decode(Decoder& dec);
};

struct CounterSnapshot {
    VersionId version;
    Quantity budget;
    bool frozen = false;
    std::set<TxId> signed_txs;
    std::set<TxId> executed;

    void encode(Encoder& enc) const;
    static CounterSnapshot decode(Decoder& dec);
};

struct ObjectSnapshot {
    VersionId version;
    std::set<OwnerId> owners;
    Quantity balance;

    void encode(Encoder& enc) const;
    static ObjectSnapshot decode(Decoder& dec);
};

struct ValidatorSnapshot {
    std::uint32_t id = 0;
    bool crashed = false;
    bool corrupt = false;
    std::map<CounterId, CounterSnapshot> counters;
    std::set<TxId> owned_executed;
    std::map<ObjectId, ObjectSnapshot> objects;
    std::map<ObjectKey, std::uint8_t> unlock_db;

    void encode(Encoder& enc) const;
    static ValidatorSnapshot decode(Decoder& dec);
};

struct CounterInfo {
    std::string label;
    Quantity initial_balance;
    VersionId v0;
    std::set<OwnerId> owners;

    void encode(Encoder& enc) const;
    static CounterInfo decode(Decoder& dec);
};

// Full record of one execution: the ordered event log plus the ledgers and
// final snapshots the oracles replay. Serialization is canonical, so two runs
// agree byte for byte exactly when they behaved identically.
struct Trace {
    std::string scenario;
    std::uint64_t seed = 0;
    Committee committee;
    std::uint64_t end_time = 0;
    bool truncated = false;

    std::vector<TraceEvent> events;
    std::map<CounterId, CounterInfo> counters;
    std::map<Digest, std::string> labels; // debug names for objects/counters
    std::map<TxId, TraceTx> txs;
    std::map<TxId, std::set<std::uint32_t>> certified; // endorser sets
    std::map<CounterId, std::vector<TraceRequest>> requests;
    std::vector<EffectSign> effects;
    std::vector<TraceSeqItem> sequenced;
    std::vector<ValidatorSnapshot> finals;
    std::set<std::uint32_t> ever_corrupt;

    // --- recording helpers (used by the simulator) ---
    TraceEvent& push(TraceKind kind, std::uint64_t time, Address actor);
    void record_tx(const Transaction& tx);
    void record_cert(const Certificate& cert);
    void record_request(const VersionRequest& req);
    void record_seq_item(const SeqItem& item);

    // --- views for oracles ---
    std::set<std::uint32_t> honest_validators() const;
    // Subjects with a quorum of matching effect signatures.
    std::map<Digest, std::set<std::uint32_t>> effect_certs() const;
    std::string label_of(const Digest& id) const;

    std::vector<std::uint8_t> canonical_bytes() const;
    Digest digest() const;
    static Trace from_bytes(std::span<const std::uint8_t> bytes);
};

void render_text(const Trace& trace, std::ostream& out);

} // namespace fastpath
