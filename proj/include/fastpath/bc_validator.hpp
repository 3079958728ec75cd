#pragma once

#include "fastpath/types.hpp"

#include <optional>
#include <set>
#include <vector>

namespace fastpath {

enum class BcError : std::uint8_t {
    none,
    invalid_input,
    invalid_auth,
    wrong_version,
    budget_exhausted,
    frozen,
    stale_version,
    uncertified_prev_tx,
    version_mismatch_in_prev_txs,
    current_version_not_merged,
    incomplete_history,
    invalid_certificate,
};

const char* to_string(BcError err);

template <typename T>
struct BcResult {
    std::optional<T> value;
    BcError error = BcError::none;

    bool ok() const { return error == BcError::none; }

    static BcResult success(T v) { return BcResult{std::move(v), BcError::none}; }
    static BcResult failure(BcError e) { return BcResult{std::nullopt, e}; }
};

// One executed counter transaction, with the effect signature to return and,
// for conversions, the owned object that replaces the counter.
struct BcExecution {
    TxId tx;
    EffectSign effect;
    std::optional<OwnedOutput> conversion_output;
    std::optional<ObjectKey> conversion_key;
};

struct BcCertOutcome {
    std::vector<BcExecution> executed; // includes parked certificates unblocked now
    bool parked = false;
    bool duplicate = false;
    bool first_seen = false; // drives rebroadcast
    BcError error = BcError::none;
};

struct BcRequestOutcome {
    bool adopted = false;
    bool duplicate = false;
    std::vector<BcExecution> executed; // unblocked by the new version knowledge
    BcError error = BcError::none;
};

// Validator-side state machine for one bounded counter. Handles transaction
// signing against the budget, certificate execution with dependency parking,
// version updates, version merges and conversion to an owned object.
//
// Single-threaded by construction: one instance per (validator, counter).
class BcValidatorState {
public:
    BcValidatorState() = default;

    // Budget starts at eta * initial balance. A different eta can be injected
    // for oracle sensitivity checks; the protocol value is committee.eta().
    BcValidatorState(const CounterGenesis& genesis, const Committee& committee, ValidatorId self,
                     std::optional<Quantity> eta_override = std::nullopt);

    BcResult<ValidatorSig> process_tx(const Transaction& tx);
    BcCertOutcome process_cert(const Certificate& cert);
    BcRequestOutcome process_version_request(const VersionRequest& req);

    // Feeds a request carried as a message attachment. Stores it without
    // adopting; certification checks happen when the request is counted.
    void learn_request(const VersionRequest& req);

    // Snapshot accessors for oracles and traces.
    const VersionId& version() const { return version_; }
    const Quantity& budget() const { return budget_; }
    bool frozen() const { return frozen_; }
    const std::set<TxId>& signed_txs() const { return signed_; }
    const std::set<TxId>& executed_txs() const { return executed_; }
    const RequestStore& requests() const { return requests_; }
    const TxTable& tx_table() const { return tx_table_; }
    bool is_certified(const TxId& id) const { return certified_.count(id) > 0; }
    const std::map<TxId, Certificate>& certificates() const { return certified_; }
    std::size_t pending_cert_count() const { return pending_certs_.size(); }
    const CounterGenesis& genesis() const { return genesis_; }
    const Quantity& eta() const { return eta_; }

    void encode(Encoder& enc) const;

private:
    BcError validate_signing(const Transaction& tx) const;
    BcError check_update_batch(const VersionUpdateBody& body) const;
    // Walks the not-yet-validated ancestor requests of a merge and collects
    // every history transaction whose budget effect is still pending.
    BcError collect_pending_history(const VersionRequest& req, std::vector<TxId>& out,
                                    std::set<VersionId>& vetted) const;
    void apply_budget_for(const TxId& txid);
    bool prerequisites_executed(const Transaction& tx) const;
    void execute_now(const Certificate& cert, std::vector<BcExecution>& out);
    void drain_pending(std::vector<BcExecution>& out);

    CounterGenesis genesis_;
    Committee committee_;
    ValidatorId self_;
    Quantity eta_;

    VersionId version_;
    Quantity budget_;
    bool frozen_ = false;

    std::set<TxId> signed_;
    std::map<TxId, ValidatorSig> sig_by_tx_;
    std::set<TxId> executed_;
    std::set<TxId> budget_counted_;
    std::map<TxId, Certificate> certified_; // first certificate seen per tx
    TxTable tx_table_;
    RequestStore requests_;
    std::set<VersionId> validated_requests_; // prev-tx certification checked
    std::set<Digest> processed_;             // request/certificate dedup
    std::map<Digest, Certificate> pending_certs_;
};

} // namespace fastpath
