#pragma once

#include "fastpath/codec.hpp"
#include "fastpath/committee.hpp"
#include "fastpath/ids.hpp"
#include "fastpath/quantity.hpp"
#include "fastpath/signer.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fastpath {

// ---------------------------------------------------------------------------
// Genesis records. Counters and owned objects are content-addressed by the
// digest of their genesis so identifiers are reproducible across runs.
// ---------------------------------------------------------------------------

struct CounterGenesis {
    std::string label;
    Quantity initial_balance;
    std::set<OwnerId> owners;

    CounterId id() const;
    VersionId v0() const;
};

struct ObjectGenesis {
    std::string label;
    std::set<OwnerId> owners;
    Quantity balance; // 0 for pure tokens-of-ownership

    ObjectId id() const;
    VersionId initial_version() const;
};

// ---------------------------------------------------------------------------
// Transactions
// ---------------------------------------------------------------------------

// Counter update: add delta to the counter, valid at one specific version.
struct BcUpdate {
    CounterId counter;
    VersionId version;
    Quantity delta;

    void encode(Encoder& enc) const;
};

struct OwnedOutput {
    ObjectId object;
    std::set<OwnerId> owners;
    Quantity balance;

    auto operator<=>(const OwnedOutput&) const = default;
    void encode(Encoder& enc) const;
};

// Regular fast-path transaction over owned objects. Consumes the exact input
// versions, produces the outputs at fresh versions derived from the tx id.
struct OwnedTx {
    std::vector<ObjectKey> inputs;
    std::vector<OwnedOutput> outputs;
    std::optional<ObjectKey> gas;

    void encode(Encoder& enc) const;
};

// Freezes a counter and materializes its remaining balance as an owned
// object. Carries the final batch of sent transactions, like a version
// update would.
struct ConvertToOwned {
    CounterId counter;
    VersionId prev_version;
    std::set<TxId> prev_txs;

    void encode(Encoder& enc) const;
};

struct Transaction {
    std::variant<BcUpdate, OwnedTx, ConvertToOwned> command;
    std::uint64_t nonce = 0;               // distinguishes otherwise-identical commands
    std::set<OwnerId> signers;             // declared authorizers
    std::map<OwnerId, OwnerSig> signatures; // over id(), not part of id()

    TxId id() const;

    bool is_bc_update() const { return std::holds_alternative<BcUpdate>(command); }
    bool is_owned() const { return std::holds_alternative<OwnedTx>(command); }
    bool is_convert() const { return std::holds_alternative<ConvertToOwned>(command); }
    const BcUpdate& bc() const { return std::get<BcUpdate>(command); }
    const OwnedTx& owned() const { return std::get<OwnedTx>(command); }
    const ConvertToOwned& convert() const { return std::get<ConvertToOwned>(command); }

    // Keys consumed by this transaction (owned path only; includes gas).
    std::vector<ObjectKey> input_keys() const;
    // Output keys produced when executed (owned path only).
    std::vector<ObjectKey> output_keys() const;
    VersionId output_version_for(ObjectId object) const;

    void sign_by(OwnerId owner);
    // All declared signers produced a verifiable signature over id().
    bool signatures_complete() const;

    void encode(Encoder& enc) const; // full encoding, signatures included
};

using TxTable = std::map<TxId, Transaction>;

// ---------------------------------------------------------------------------
// Certificates and effects
// ---------------------------------------------------------------------------

struct Certificate {
    Transaction tx;
    std::set<ValidatorSig> endorsements; // ordered by validator id: canonical

    Digest digest() const;

    void encode(Encoder& enc) const;
};

// Two certificates over the same transaction are the same certificate, no
// matter which quorum endorsed them.
inline bool same_certificate(const Certificate& a, const Certificate& b) {
    return a.tx.id() == b.tx.id();
}

bool validate_certificate(const Certificate& cert, const Committee& committee);

struct EffectSign {
    ValidatorId validator;
    Digest subject; // transaction id or unlock certificate id
    Digest result;  // digest of the produced object keys (or execution marker)
    ValidatorSig sig;

    auto operator<=>(const EffectSign&) const = default;
    Digest payload_digest() const;
    void encode(Encoder& enc) const;
};

EffectSign make_effect_sign(ValidatorId validator, const Digest& subject, const Digest& result);
bool verify_effect_sign(const EffectSign& es);

// ---------------------------------------------------------------------------
// Version requests and the version DAG
// ---------------------------------------------------------------------------

struct VersionUpdateBody {
    VersionId prev_version;
    std::set<TxId> prev_txs;
};

struct VersionMergeBody {
    std::set<VersionId> prev_versions;
};

struct VersionRequest {
    CounterId counter;
    std::variant<VersionUpdateBody, VersionMergeBody> body;
    OwnerId requester;
    OwnerSig sig;

    bool is_update() const { return std::holds_alternative<VersionUpdateBody>(body); }
    bool is_merge() const { return std::holds_alternative<VersionMergeBody>(body); }
    const VersionUpdateBody& update() const { return std::get<VersionUpdateBody>(body); }
    const VersionMergeBody& merge() const { return std::get<VersionMergeBody>(body); }

    // The version this request creates is the digest of the request itself.
    VersionId new_version() const;
    Digest signing_digest() const;

    std::set<VersionId> parents() const;

    void encode(Encoder& enc) const;
};

// Known version requests for one counter, rooted at its genesis version.
class RequestStore {
public:
    RequestStore() = default;
    explicit RequestStore(VersionId root) : root_(root) {}

    VersionId root() const { return root_; }
    void set_root(VersionId root) { root_ = root; }

    bool knows(const VersionId& v) const { return v == root_ || requests_.count(v) > 0; }
    void add(const VersionRequest& req) { requests_.emplace(req.new_version(), req); }
    const VersionRequest* find(const VersionId& v) const;
    const std::map<VersionId, VersionRequest>& all() const { return requests_; }

private:
    VersionId root_{};
    std::map<VersionId, VersionRequest> requests_;
};

enum class HistoryErrorKind { unknown_version, root_has_no_parent, incomplete_history };

class HistoryError : public std::runtime_error {
public:
    HistoryError(HistoryErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    HistoryErrorKind kind() const { return kind_; }

private:
    HistoryErrorKind kind_;
};

// Sum of deltas over a set of counter transactions. All transactions must be
// counter updates on the same counter.
Quantity val(const std::vector<Transaction>& txs);
Quantity val(const TxTable& table, const std::set<TxId>& ids);

// Parent versions of v: the single PrevVersion of an update or all
// PrevVersions of a merge. The root version has no parent.
std::set<VersionId> parents_of(const VersionId& v, const RequestStore& requests);

// Every transaction referenced by the version requests on any path from the
// root to v. Duplicates across merge branches collapse.
std::set<TxId> history_of(const VersionId& v, const RequestStore& requests);

// True if a path of parent links leads from descendant back to ancestor
// (or they are equal).
bool reachable(const VersionId& descendant, const VersionId& ancestor, const RequestStore& requests);

} // namespace fastpath
