#include "fastpath/owned.hpp"

namespace fastpath {

const char* to_string(OwnedError err) {
    switch (err) {
    case OwnedError::none: return "none";
    case OwnedError::unknown_object: return "unknown-object";
    case OwnedError::bad_auth: return "bad-auth";
    case OwnedError::equivocation_detected: return "equivocation-detected";
    case OwnedError::invalid_cert: return "invalid-cert";
    case OwnedError::unlocked_key_refusal: return "unlocked-key-refusal";
    case OwnedError::stale_gas: return "stale-gas";
    case OwnedError::not_executable: return "not-executable";
    }
    return "unknown";
}

void ObjectValidator::install_genesis(const ObjectGenesis& genesis) {
    ObjectKey key{genesis.id(), genesis.initial_version()};
    objects_[genesis.id()] = OwnedObject{key.version, genesis.owners, genesis.balance};
    owners_at_[key] = genesis.owners;
}

void ObjectValidator::install_object(const ObjectKey& key, const OwnedOutput& output) {
    objects_[key.object] = OwnedObject{key.version, output.owners, output.balance};
    owners_at_[key] = output.owners;
}

const OwnedObject* ObjectValidator::find_object(const ObjectId& id) const {
    auto it = objects_.find(id);
    return it == objects_.end() ? nullptr : &it->second;
}

const std::set<OwnerId>* ObjectValidator::owners_at(const ObjectKey& key) const {
    auto it = owners_at_.find(key);
    return it == owners_at_.end() ? nullptr : &it->second;
}

UnlockState ObjectValidator::unlock_state(const ObjectKey& key) const {
    auto it = unlock_db_.find(key);
    return it == unlock_db_.end() ? UnlockState::none : it->second;
}

void ObjectValidator::set_unlock_state(const ObjectKey& key, UnlockState next) {
    UnlockState cur = unlock_state(key);
    // Monotone per key: none -> unlocked -> confirmed, never backwards.
    if (next == UnlockState::unlocked && cur != UnlockState::none) return;
    if (next == UnlockState::none) return;
    unlock_db_[key] = next;
}

OwnedError ObjectValidator::check_signing(const Transaction& tx) const {
    if (!tx.is_owned() || tx.owned().inputs.empty()) return OwnedError::bad_auth;
    if (tx.signers.empty() || !tx.signatures_complete()) return OwnedError::bad_auth;
    for (const auto& key : tx.input_keys()) {
        const OwnedObject* obj = find_object(key.object);
        if (obj == nullptr || obj->version != key.version) return OwnedError::unknown_object;
        for (auto owner : obj->owners)
            if (tx.signers.count(owner) == 0) return OwnedError::bad_auth;
    }
    const TxId id = tx.id();
    for (const auto& key : tx.input_keys()) {
        auto lock = sign_locks_.find(key);
        if (lock != sign_locks_.end() && lock->second != id)
            return OwnedError::equivocation_detected;
    }
    return OwnedError::none;
}

OwnedResult<ValidatorSig> ObjectValidator::process_tx(const Transaction& tx) {
    const TxId id = tx.id();
    if (auto it = sig_by_tx_.find(id); it != sig_by_tx_.end())
        return OwnedResult<ValidatorSig>::success(it->second);
    if (OwnedError err = check_signing(tx); err != OwnedError::none)
        return OwnedResult<ValidatorSig>::failure(err);
    for (const auto& key : tx.input_keys())
        sign_locks_.emplace(key, id);
    auto sig = make_validator_sig(self_, id);
    sig_by_tx_.emplace(id, sig);
    return OwnedResult<ValidatorSig>::success(sig);
}

bool ObjectValidator::inputs_live(const Transaction& tx) const {
    for (const auto& key : tx.input_keys()) {
        const OwnedObject* obj = find_object(key.object);
        if (obj == nullptr || obj->version != key.version) return false;
    }
    return true;
}

EffectSign ObjectValidator::execute_tx(const Transaction& tx, const Certificate* lock_record,
                                       bool fast_path) {
    const TxId id = tx.id();
    ExecSnapshot snapshot;
    for (const auto& key : tx.input_keys()) {
        snapshot.consumed.emplace_back(key.object, objects_.at(key.object));
        objects_.erase(key.object);
        if (lock_record != nullptr) lock_db_.emplace(key, *lock_record);
    }
    for (const auto& out : tx.owned().outputs) {
        ObjectKey key{out.object, tx.output_version_for(out.object)};
        objects_[out.object] = OwnedObject{key.version, out.owners, out.balance};
        owners_at_[key] = out.owners;
        snapshot.created.push_back(out.object);
    }
    executed_.insert(id);
    if (fast_path) snapshots_[id] = std::move(snapshot);

    Encoder enc;
    enc.seq(tx.output_keys(), [](Encoder& e, const ObjectKey& k) { k.encode(e); });
    return make_effect_sign(self_, id, enc.digest_of());
}

void ObjectValidator::undo_fast_execution(const TxId& txid) {
    auto it = snapshots_.find(txid);
    if (it == snapshots_.end()) return;
    for (const auto& created : it->second.created) objects_.erase(created);
    for (const auto& [object, state] : it->second.consumed) objects_[object] = state;
    executed_.erase(txid);
    snapshots_.erase(it);
}

OwnedExecOutcome ObjectValidator::process_cert(const Certificate& cert) {
    OwnedExecOutcome outcome;
    if (!cert.tx.is_owned()) {
        outcome.error = OwnedError::invalid_cert;
        return outcome;
    }
    const TxId id = cert.tx.id();
    if (executed_.count(id) > 0) {
        outcome.duplicate = true;
        return outcome;
    }
    if (!validate_certificate(cert, committee_)) {
        outcome.error = OwnedError::invalid_cert;
        return outcome;
    }
    if (unlocked_refusal_) {
        for (const auto& key : cert.tx.input_keys()) {
            if (unlock_state(key) != UnlockState::none) {
                // An unlock is in flight (or resolved) for this key; only the
                // consensus path may touch it now.
                outcome.refused = true;
                outcome.error = OwnedError::unlocked_key_refusal;
                return outcome;
            }
        }
    }
    if (!inputs_live(cert.tx)) {
        outcome.error = OwnedError::not_executable;
        return outcome;
    }
    outcome.effect = execute_tx(cert.tx, &cert, /*fast_path=*/true);
    return outcome;
}

void ObjectValidator::epoch_end() {
    // Locks drop; executed state stays. Unlocked entries reset because the
    // epoch boundary resolves every in-flight unlock; confirmed entries are
    // permanent execution records.
    sign_locks_.clear();
    for (auto it = unlock_db_.begin(); it != unlock_db_.end();) {
        if (it->second == UnlockState::unlocked)
            it = unlock_db_.erase(it);
        else
            ++it;
    }
}

void ObjectValidator::encode(Encoder& enc) const {
    enc.u64(objects_.size());
    for (const auto& [id, obj] : objects_) {
        enc.digest(id);
        enc.digest(obj.version);
        enc.seq(obj.owners, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
        obj.balance.encode(enc);
    }
    enc.u64(sign_locks_.size());
    for (const auto& [key, tx] : sign_locks_) {
        key.encode(enc);
        enc.digest(tx);
    }
    enc.u64(lock_db_.size());
    for (const auto& [key, cert] : lock_db_) {
        key.encode(enc);
        enc.digest(cert.tx.id());
    }
    enc.u64(unlock_db_.size());
    for (const auto& [key, state] : unlock_db_) {
        key.encode(enc);
        enc.u8(static_cast<std::uint8_t>(state));
    }
    enc.seq(executed_, [](Encoder& e, const TxId& t) { e.digest(t); });
    enc.u64(noop_bumped_.size());
    for (const auto& k : noop_bumped_) k.encode(enc);
    enc.u64(processed_ucerts_.size());
    for (const auto& d : processed_ucerts_) enc.digest(d);
}

} // namespace fastpath
