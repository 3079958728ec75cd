#include "fastpath/types.hpp"

#include <algorithm>

namespace fastpath {

// --- genesis ---------------------------------------------------------------

CounterId CounterGenesis::id() const {
    return tagged_digest("genesis/counter", [&](Encoder& enc) {
        enc.str(label);
        initial_balance.encode(enc);
        enc.seq(owners, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
    });
}

VersionId CounterGenesis::v0() const {
    return tagged_digest("counter/v0", [&](Encoder& enc) { enc.digest(id()); });
}

ObjectId ObjectGenesis::id() const {
    return tagged_digest("genesis/object", [&](Encoder& enc) {
        enc.str(label);
        enc.seq(owners, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
        balance.encode(enc);
    });
}

VersionId ObjectGenesis::initial_version() const {
    return tagged_digest("object/v0", [&](Encoder& enc) { enc.digest(id()); });
}

// --- transactions ----------------------------------------------------------

void BcUpdate::encode(Encoder& enc) const {
    enc.digest(counter);
    enc.digest(version);
    delta.encode(enc);
}

void OwnedOutput::encode(Encoder& enc) const {
    enc.digest(object);
    enc.seq(owners, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
    balance.encode(enc);
}

void OwnedTx::encode(Encoder& enc) const {
    enc.seq(inputs, [](Encoder& e, const ObjectKey& k) { k.encode(e); });
    enc.seq(outputs, [](Encoder& e, const OwnedOutput& o) { o.encode(e); });
    enc.opt(gas, [](Encoder& e, const ObjectKey& k) { k.encode(e); });
}

void ConvertToOwned::encode(Encoder& enc) const {
    enc.digest(counter);
    enc.digest(prev_version);
    enc.seq(prev_txs, [](Encoder& e, const TxId& t) { e.digest(t); });
}

namespace {
void encode_command(Encoder& enc, const Transaction& tx) {
    enc.u8(static_cast<std::uint8_t>(tx.command.index()));
    std::visit([&](const auto& cmd) { cmd.encode(enc); }, tx.command);
    enc.u64(tx.nonce);
    enc.seq(tx.signers, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
}
} // namespace

TxId Transaction::id() const {
    return tagged_digest("tx", [&](Encoder& enc) { encode_command(enc, *this); });
}

std::vector<ObjectKey> Transaction::input_keys() const {
    if (!is_owned()) return {};
    auto keys = owned().inputs;
    if (owned().gas) keys.push_back(*owned().gas);
    return keys;
}

VersionId Transaction::output_version_for(ObjectId object) const {
    return tagged_digest("object/version", [&](Encoder& enc) {
        enc.digest(id());
        enc.digest(object);
    });
}

std::vector<ObjectKey> Transaction::output_keys() const {
    std::vector<ObjectKey> keys;
    if (!is_owned()) return keys;
    for (const auto& out : owned().outputs)
        keys.push_back(ObjectKey{out.object, output_version_for(out.object)});
    return keys;
}

void Transaction::sign_by(OwnerId owner) {
    signatures[owner] = make_owner_sig(owner, id());
}

bool Transaction::signatures_complete() const {
    for (auto owner : signers) {
        auto it = signatures.find(owner);
        if (it == signatures.end()) return false;
        if (it->second.signer != owner || it->second.message != id() || !verify(it->second))
            return false;
    }
    return true;
}

void Transaction::encode(Encoder& enc) const {
    encode_command(enc, *this);
    enc.seq(signatures, [](Encoder& e, const std::pair<const OwnerId, OwnerSig>& kv) {
        kv.second.encode(e);
    });
}

// --- certificates ----------------------------------------------------------

Digest Certificate::digest() const {
    return tagged_digest("cert", [&](Encoder& enc) { encode(enc); });
}

void Certificate::encode(Encoder& enc) const {
    tx.encode(enc);
    enc.seq(endorsements, [](Encoder& e, const ValidatorSig& s) { s.encode(e); });
}

bool validate_certificate(const Certificate& cert, const Committee& committee) {
    if (!cert.tx.signatures_complete()) return false;
    const TxId txid = cert.tx.id();
    std::set<ValidatorId> distinct;
    for (const auto& sig : cert.endorsements) {
        if (!committee.contains(sig.signer)) return false;
        if (sig.message != txid || !verify(sig)) return false;
        distinct.insert(sig.signer);
    }
    return distinct.size() >= committee.quorum_size();
}

// --- effects ---------------------------------------------------------------

Digest EffectSign::payload_digest() const {
    return tagged_digest("effect", [&](Encoder& enc) {
        enc.digest(subject);
        enc.digest(result);
    });
}

void EffectSign::encode(Encoder& enc) const {
    enc.u32(validator.index);
    enc.digest(subject);
    enc.digest(result);
    sig.encode(enc);
}

EffectSign make_effect_sign(ValidatorId validator, const Digest& subject, const Digest& result) {
    EffectSign es{validator, subject, result, {}};
    es.sig = make_validator_sig(validator, es.payload_digest());
    return es;
}

bool verify_effect_sign(const EffectSign& es) {
    return es.sig.signer == es.validator && es.sig.message == es.payload_digest() && verify(es.sig);
}

// --- version requests ------------------------------------------------------

void VersionRequest::encode(Encoder& enc) const {
    enc.digest(counter);
    enc.u8(static_cast<std::uint8_t>(body.index()));
    if (is_update()) {
        enc.digest(update().prev_version);
        enc.seq(update().prev_txs, [](Encoder& e, const TxId& t) { e.digest(t); });
    } else {
        enc.seq(merge().prev_versions, [](Encoder& e, const VersionId& v) { e.digest(v); });
    }
    enc.u32(requester.id);
}

Digest VersionRequest::signing_digest() const {
    return tagged_digest("vreq", [&](Encoder& enc) { encode(enc); });
}

VersionId VersionRequest::new_version() const {
    return signing_digest();
}

std::set<VersionId> VersionRequest::parents() const {
    if (is_update()) return {update().prev_version};
    return merge().prev_versions;
}

const VersionRequest* RequestStore::find(const VersionId& v) const {
    auto it = requests_.find(v);
    return it == requests_.end() ? nullptr : &it->second;
}

// --- value and history -----------------------------------------------------

namespace {
Quantity delta_of(const Transaction& tx, const CounterId*& counter) {
    if (!tx.is_bc_update()) throw std::invalid_argument("val: non-counter transaction in set");
    if (counter == nullptr)
        counter = &tx.bc().counter;
    else if (*counter != tx.bc().counter)
        throw std::invalid_argument("val: transactions over mixed counters");
    return tx.bc().delta;
}
} // namespace

Quantity val(const std::vector<Transaction>& txs) {
    Quantity total = 0;
    const CounterId* counter = nullptr;
    for (const auto& tx : txs) total += delta_of(tx, counter);
    return total;
}

Quantity val(const TxTable& table, const std::set<TxId>& ids) {
    Quantity total = 0;
    const CounterId* counter = nullptr;
    for (const auto& id : ids) {
        auto it = table.find(id);
        if (it == table.end()) throw std::invalid_argument("val: unknown transaction id");
        total += delta_of(it->second, counter);
    }
    return total;
}

std::set<VersionId> parents_of(const VersionId& v, const RequestStore& requests) {
    if (v == requests.root())
        throw HistoryError(HistoryErrorKind::root_has_no_parent, "root version has no parent");
    const auto* req = requests.find(v);
    if (req == nullptr)
        throw HistoryError(HistoryErrorKind::unknown_version, "no request known for version");
    return req->parents();
}

std::set<TxId> history_of(const VersionId& v, const RequestStore& requests) {
    if (v == requests.root()) return {};
    std::set<TxId> out;
    std::set<VersionId> visited;
    std::vector<VersionId> stack{v};
    while (!stack.empty()) {
        VersionId cur = stack.back();
        stack.pop_back();
        if (cur == requests.root() || !visited.insert(cur).second) continue;
        const auto* req = requests.find(cur);
        if (req == nullptr)
            throw HistoryError(HistoryErrorKind::incomplete_history,
                               "missing ancestor request for version");
        if (req->is_update()) {
            out.insert(req->update().prev_txs.begin(), req->update().prev_txs.end());
            stack.push_back(req->update().prev_version);
        } else {
            for (const auto& p : req->merge().prev_versions) stack.push_back(p);
        }
    }
    return out;
}

bool reachable(const VersionId& descendant, const VersionId& ancestor, const RequestStore& requests) {
    if (descendant == ancestor) return true;
    std::set<VersionId> visited;
    std::vector<VersionId> stack{descendant};
    while (!stack.empty()) {
        VersionId cur = stack.back();
        stack.pop_back();
        if (cur == ancestor) return true;
        if (cur == requests.root() || !visited.insert(cur).second) continue;
        const auto* req = requests.find(cur);
        if (req == nullptr) continue; // unreachable through unknown links
        for (const auto& p : req->parents()) stack.push_back(p);
    }
    return false;
}

} // namespace fastpath
