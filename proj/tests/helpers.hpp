#pragma once

#include "fastpath/owned.hpp"
#include "fastpath/types.hpp"

#include <initializer_list>

// Shared builders for protocol objects used across the test suites.
namespace fptest {

using namespace fastpath;

inline OwnerId alice() { return OwnerId{1}; }
inline OwnerId bob() { return OwnerId{2}; }
inline OwnerId carol() { return OwnerId{3}; }

inline CounterGenesis counter_genesis(const std::string& label, std::int64_t balance,
                                      std::set<OwnerId> owners = {alice()}) {
    return CounterGenesis{label, Quantity(balance), std::move(owners)};
}

inline Transaction bc_tx(const CounterGenesis& g, const VersionId& version, Quantity delta,
                         std::uint64_t nonce, OwnerId owner = alice()) {
    Transaction tx;
    tx.command = BcUpdate{g.id(), version, std::move(delta)};
    tx.nonce = nonce;
    tx.signers = {owner};
    tx.sign_by(owner);
    return tx;
}

inline Certificate certify(const Transaction& tx, std::initializer_list<std::uint32_t> validators) {
    Certificate cert;
    cert.tx = tx;
    for (auto v : validators)
        cert.endorsements.insert(make_validator_sig(ValidatorId{v}, tx.id()));
    return cert;
}

inline Certificate certify_quorum(const Transaction& tx, const Committee& committee) {
    Certificate cert;
    cert.tx = tx;
    for (std::uint32_t v = 0; v < committee.quorum_size(); ++v)
        cert.endorsements.insert(make_validator_sig(ValidatorId{v}, tx.id()));
    return cert;
}

inline VersionRequest update_req(const CounterGenesis& g, const VersionId& prev,
                                 const std::set<TxId>& txs, OwnerId owner = alice()) {
    VersionRequest req;
    req.counter = g.id();
    req.body = VersionUpdateBody{prev, txs};
    req.requester = owner;
    req.sig = make_owner_sig(owner, req.signing_digest());
    return req;
}

inline VersionRequest merge_req(const CounterGenesis& g, const std::set<VersionId>& prevs,
                                OwnerId owner = alice()) {
    VersionRequest req;
    req.counter = g.id();
    req.body = VersionMergeBody{prevs};
    req.requester = owner;
    req.sig = make_owner_sig(owner, req.signing_digest());
    return req;
}

inline ObjectGenesis object_genesis(const std::string& label, std::set<OwnerId> owners,
                                    std::int64_t balance = 0) {
    return ObjectGenesis{label, std::move(owners), Quantity(balance)};
}

inline ObjectKey key_of(const ObjectGenesis& g) { return {g.id(), g.initial_version()}; }

inline Transaction owned_tx(std::vector<ObjectKey> inputs, std::vector<OwnedOutput> outputs,
                            std::set<OwnerId> signers, std::uint64_t nonce = 0,
                            std::optional<ObjectKey> gas = std::nullopt) {
    Transaction tx;
    tx.command = OwnedTx{std::move(inputs), std::move(outputs), std::move(gas)};
    tx.nonce = nonce;
    tx.signers = signers;
    for (auto s : signers) tx.sign_by(s);
    return tx;
}

// Atomic swap: alice's object and bob's object exchange owners.
inline Transaction swap_tx(const ObjectGenesis& a, const ObjectGenesis& b,
                           std::uint64_t nonce = 0, std::optional<ObjectKey> gas = std::nullopt) {
    return owned_tx({key_of(a), key_of(b)},
                    {OwnedOutput{a.id(), b.owners, a.balance}, OwnedOutput{b.id(), a.owners, b.balance}},
                    [&] {
                        std::set<OwnerId> signers = a.owners;
                        signers.insert(b.owners.begin(), b.owners.end());
                        return signers;
                    }(),
                    nonce, gas);
}

inline UnlockRqt unlock_rqt(std::vector<ObjectKey> keys, Transaction evidence, ObjectKey gas,
                            OwnerId requester,
                            std::optional<Transaction> replacement = std::nullopt) {
    UnlockRqt rqt;
    rqt.object_keys = std::move(keys);
    rqt.evidence = std::move(evidence);
    rqt.replacement = std::move(replacement);
    rqt.gas = gas;
    rqt.requester = requester;
    rqt.sig = make_owner_sig(requester, rqt.signing_digest());
    return rqt;
}

// Tiny deterministic generator for property-style tests.
struct Rand {
    std::uint64_t state;
    explicit Rand(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    std::int64_t in_range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }
};

} // namespace fptest
