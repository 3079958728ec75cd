#pragma once

#include "fastpath/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace fastpath {

enum class OwnedError : std::uint8_t {
    none,
    unknown_object,
    bad_auth,
    equivocation_detected,
    invalid_cert,
    unlocked_key_refusal,
    stale_gas,
    not_executable,
};

const char* to_string(OwnedError err);

template <typename T>
struct OwnedResult {
    std::optional<T> value;
    OwnedError error = OwnedError::none;
    bool ok() const { return error == OwnedError::none; }

    static OwnedResult success(T v) { return OwnedResult{std::move(v), OwnedError::none}; }
    static OwnedResult failure(OwnedError e) { return OwnedResult{std::nullopt, e}; }
};

enum class UnlockState : std::uint8_t { none, unlocked, confirmed };

struct UnlockRqt {
    std::vector<ObjectKey> object_keys;
    Transaction evidence; // owner-signed transaction covering every key
    std::optional<Transaction> replacement; // multi-object variant executes this on no-commit
    ObjectKey gas;
    OwnerId requester;
    OwnerSig sig;

    bool multi_object() const { return replacement.has_value(); }
    Digest signing_digest() const;
    Digest digest() const { return signing_digest(); }
    void encode(Encoder& enc) const;
};

struct UnlockVote {
    Digest rqt;
    std::vector<Certificate> found; // certificates held for the requested keys
    ValidatorId validator;
    ValidatorSig sig; // over the request digest

    Digest vote_digest() const;
    void encode(Encoder& enc) const;
};

UnlockVote make_unlock_vote(ValidatorId validator, const Digest& rqt,
                            std::vector<Certificate> found);

struct UnlockCert {
    UnlockRqt rqt;
    std::vector<Certificate> certs; // union of reported certificates, one per tx
    std::vector<UnlockVote> votes;  // quorum, each vote re-verifiable as sent

    bool no_commit() const { return certs.empty(); }
    Digest digest() const;
    void encode(Encoder& enc) const;
};

// Quorum of votes over one request; reported certificates are merged and
// deduplicated by transaction. Votes for other requests are ignored.
std::optional<UnlockCert> assemble_unlock_cert(const UnlockRqt& rqt,
                                               const std::vector<UnlockVote>& votes,
                                               const Committee& committee);

bool validate_unlock_cert(const UnlockCert& ucert, const Committee& committee);

struct OwnedObject {
    VersionId version;
    std::set<OwnerId> owners;
    Quantity balance;
};

struct OwnedExecOutcome {
    std::optional<EffectSign> effect;
    bool duplicate = false;
    bool refused = false; // fast path refusal on an unlocked key
    OwnedError error = OwnedError::none;
};

struct UnlockVoteOutcome {
    std::optional<UnlockVote> vote;
    OwnedError error = OwnedError::none;
    std::vector<ObjectKey> newly_unlocked;
};

struct UnlockCertOutcome {
    std::vector<EffectSign> effects;
    bool skipped = false; // some key already confirmed
    bool gas_spent = false;
    std::vector<TxId> undone;    // fast-path executions rolled back
    std::vector<TxId> executed;  // transactions applied while processing
    bool noop_executed = false;
    OwnedError error = OwnedError::none;
};

struct ConsensusExecOutcome {
    std::optional<EffectSign> effect;
    bool skipped = false;   // key already confirmed by an earlier sequenced item
    bool executed = false;  // ran here (late execution)
    bool confirmed_only = false; // fast path already ran it; this just pins it
    OwnedError error = OwnedError::none;
};

// Validator-side state for owned objects: live object versions, signing
// locks, certificate records, the unlock table and single-depth undo
// snapshots. One instance per validator.
class ObjectValidator {
public:
    ObjectValidator() = default;
    ObjectValidator(Committee committee, ValidatorId self)
        : committee_(committee), self_(self) {}

    void install_genesis(const ObjectGenesis& genesis);
    void install_object(const ObjectKey& key, const OwnedOutput& output);

    // Fast path: lock-checked signing and certificate execution.
    OwnedResult<ValidatorSig> process_tx(const Transaction& tx);
    OwnedExecOutcome process_cert(const Certificate& cert);
    void epoch_end();

    // Unlock protocol (consensus side handlers live in fast_unlock.cpp).
    UnlockVoteOutcome process_unlock_rqt(const UnlockRqt& rqt);
    UnlockCertOutcome process_unlock_cert(const UnlockCert& ucert);
    ConsensusExecOutcome consensus_cert_execute(const Certificate& cert);

    // Oracle sensitivity control: turning the refusal off must break the
    // no-revert guarantee in at least one interleaving.
    void set_unlocked_refusal(bool on) { unlocked_refusal_ = on; }

    // Snapshots for oracles.
    const std::map<ObjectId, OwnedObject>& objects() const { return objects_; }
    const std::map<ObjectKey, TxId>& sign_locks() const { return sign_locks_; }
    const std::map<ObjectKey, Certificate>& lock_db() const { return lock_db_; }
    const std::map<ObjectKey, UnlockState>& unlock_db() const { return unlock_db_; }
    const std::set<TxId>& executed_txs() const { return executed_; }
    const std::set<ObjectKey>& noop_bumped() const { return noop_bumped_; }
    UnlockState unlock_state(const ObjectKey& key) const;
    const OwnedObject* find_object(const ObjectId& id) const;

    void encode(Encoder& enc) const;

private:
    friend struct UnlockMachinery;

    OwnedError check_signing(const Transaction& tx) const;
    // Consumes inputs and creates outputs. Fast-path executions additionally
    // keep a one-deep undo snapshot; lock_record, when given, lands in the
    // certificate table. Caller has already validated.
    EffectSign execute_tx(const Transaction& tx, const Certificate* lock_record, bool fast_path);
    void undo_fast_execution(const TxId& txid);
    bool inputs_live(const Transaction& tx) const;
    const std::set<OwnerId>* owners_at(const ObjectKey& key) const;
    void set_unlock_state(const ObjectKey& key, UnlockState next);

    struct ExecSnapshot {
        std::vector<std::pair<ObjectId, OwnedObject>> consumed;
        std::vector<ObjectId> created;
    };

    Committee committee_;
    ValidatorId self_;
    bool unlocked_refusal_ = true;

    std::map<ObjectId, OwnedObject> objects_;      // live version per object
    std::map<ObjectKey, std::set<OwnerId>> owners_at_; // owner sets per key ever created
    std::map<ObjectKey, TxId> sign_locks_;         // first transaction signed per key
    std::map<ObjectKey, Certificate> lock_db_;     // certificate record per key
    std::map<ObjectKey, UnlockState> unlock_db_;
    std::map<TxId, ValidatorSig> sig_by_tx_;
    std::set<TxId> executed_;
    std::map<TxId, ExecSnapshot> snapshots_;       // single undo layer per fast execution
    std::set<ObjectKey> noop_bumped_;
    std::map<Digest, UnlockVote> vote_by_rqt_;
    std::set<Digest> processed_ucerts_;
    std::set<Digest> gas_spent_for_;
};

} // namespace fastpath
