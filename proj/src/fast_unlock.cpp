#include "fastpath/owned.hpp"

#include <algorithm>

namespace fastpath {

// --- unlock message types ----------------------------------------------------

void UnlockRqt::encode(Encoder& enc) const {
    enc.seq(object_keys, [](Encoder& e, const ObjectKey& k) { k.encode(e); });
    evidence.encode(enc);
    enc.opt(replacement, [](Encoder& e, const Transaction& t) { t.encode(e); });
    gas.encode(enc);
    enc.u32(requester.id);
}

Digest UnlockRqt::signing_digest() const {
    return tagged_digest("unlock/rqt", [&](Encoder& enc) { encode(enc); });
}

Digest UnlockVote::vote_digest() const {
    // Binds the reported certificates: a relayer cannot strip them to forge
    // a no-commit proof out of votes that did report an execution.
    return tagged_digest("unlock/vote", [&](Encoder& enc) {
        enc.digest(rqt);
        enc.u64(found.size());
        for (const auto& cert : found) enc.digest(cert.tx.id());
    });
}

void UnlockVote::encode(Encoder& enc) const {
    enc.digest(rqt);
    enc.seq(found, [](Encoder& e, const Certificate& c) { c.encode(e); });
    enc.u32(validator.index);
    sig.encode(enc);
}

UnlockVote make_unlock_vote(ValidatorId validator, const Digest& rqt,
                            std::vector<Certificate> found) {
    UnlockVote vote{rqt, std::move(found), validator, {}};
    vote.sig = make_validator_sig(validator, vote.vote_digest());
    return vote;
}

Digest UnlockCert::digest() const {
    return tagged_digest("unlock/cert", [&](Encoder& enc) { encode(enc); });
}

void UnlockCert::encode(Encoder& enc) const {
    enc.digest(rqt.signing_digest());
    enc.u64(certs.size());
    for (const auto& cert : certs) enc.digest(cert.tx.id());
    enc.seq(votes, [](Encoder& e, const UnlockVote& v) { v.encode(e); });
}

namespace {
bool vote_is_valid(const UnlockVote& vote, const Digest& rqt, const Committee& committee) {
    return vote.rqt == rqt && committee.contains(vote.validator) &&
           vote.sig.signer == vote.validator && vote.sig.message == vote.vote_digest() &&
           verify(vote.sig);
}
} // namespace

std::optional<UnlockCert> assemble_unlock_cert(const UnlockRqt& rqt,
                                               const std::vector<UnlockVote>& votes,
                                               const Committee& committee) {
    const Digest rqtd = rqt.signing_digest();
    std::map<ValidatorId, const UnlockVote*> usable;
    for (const auto& vote : votes)
        if (vote_is_valid(vote, rqtd, committee)) usable.emplace(vote.validator, &vote);
    if (usable.size() < committee.quorum_size()) return std::nullopt;

    UnlockCert ucert;
    ucert.rqt = rqt;
    std::map<TxId, Certificate> merged;
    std::size_t taken = 0;
    for (const auto& [validator, vote] : usable) {
        if (taken == committee.quorum_size()) break;
        ++taken;
        ucert.votes.push_back(*vote);
        for (const auto& cert : vote->found) merged.emplace(cert.tx.id(), cert);
    }
    for (auto& [txid, cert] : merged) ucert.certs.push_back(std::move(cert));
    return ucert;
}

bool validate_unlock_cert(const UnlockCert& ucert, const Committee& committee) {
    const Digest rqtd = ucert.rqt.signing_digest();
    if (ucert.rqt.object_keys.empty()) return false;
    if (ucert.rqt.sig.signer != ucert.rqt.requester || ucert.rqt.sig.message != rqtd ||
        !verify(ucert.rqt.sig))
        return false;

    std::set<ValidatorId> distinct;
    std::map<TxId, bool> reported;
    for (const auto& vote : ucert.votes) {
        if (!vote_is_valid(vote, rqtd, committee)) return false;
        distinct.insert(vote.validator);
        for (const auto& cert : vote.found) reported[cert.tx.id()] = true;
    }
    if (distinct.size() < committee.quorum_size()) return false;

    // The certificate list must be exactly what the quorum reported.
    if (ucert.certs.size() != reported.size()) return false;
    for (const auto& cert : ucert.certs) {
        if (reported.count(cert.tx.id()) == 0) return false;
        if (!validate_certificate(cert, committee)) return false;
    }
    return true;
}

// --- validator-side unlock handlers ------------------------------------------

UnlockVoteOutcome ObjectValidator::process_unlock_rqt(const UnlockRqt& rqt) {
    UnlockVoteOutcome outcome;
    const Digest rqtd = rqt.signing_digest();
    if (auto it = vote_by_rqt_.find(rqtd); it != vote_by_rqt_.end()) {
        outcome.vote = it->second;
        return outcome;
    }

    // Authorization: the request is signed by the requester, the evidence
    // transaction covers every key, is fully signed, and the requester may
    // modify each key as well as the gas object.
    if (rqt.object_keys.empty() || rqt.sig.signer != rqt.requester || rqt.sig.message != rqtd ||
        !verify(rqt.sig) || !rqt.evidence.signatures_complete() || !rqt.evidence.is_owned()) {
        outcome.error = OwnedError::bad_auth;
        return outcome;
    }
    // The requester must be a party to the evidence transaction, and the
    // evidence must cover every key and carry the signature of every owner of
    // every key. Possession of such a transaction is the proof that the
    // requester may force these keys through the consensus path.
    if (rqt.evidence.signers.count(rqt.requester) == 0) {
        outcome.error = OwnedError::bad_auth;
        return outcome;
    }
    auto evidence_keys = rqt.evidence.input_keys();
    for (const auto& key : rqt.object_keys) {
        if (std::find(evidence_keys.begin(), evidence_keys.end(), key) == evidence_keys.end()) {
            outcome.error = OwnedError::bad_auth;
            return outcome;
        }
        const auto* owners = owners_at(key);
        if (owners == nullptr || owners->empty()) {
            outcome.error = OwnedError::bad_auth;
            return outcome;
        }
        for (auto owner : *owners) {
            if (rqt.evidence.signers.count(owner) == 0) {
                outcome.error = OwnedError::bad_auth;
                return outcome;
            }
        }
    }
    if (rqt.multi_object() &&
        (!rqt.replacement->is_owned() || !rqt.replacement->signatures_complete())) {
        outcome.error = OwnedError::bad_auth;
        return outcome;
    }

    // Fresh gas: live at the stated version, owned by the requester, never
    // locked, certified or pulled into an earlier unlock.
    const OwnedObject* gas = find_object(rqt.gas.object);
    bool gas_is_key = std::find(rqt.object_keys.begin(), rqt.object_keys.end(), rqt.gas) !=
                      rqt.object_keys.end();
    if (gas_is_key || gas == nullptr || gas->version != rqt.gas.version ||
        gas->owners.count(rqt.requester) == 0 || sign_locks_.count(rqt.gas) > 0 ||
        lock_db_.count(rqt.gas) > 0 || unlock_state(rqt.gas) != UnlockState::none) {
        outcome.error = OwnedError::stale_gas;
        return outcome;
    }

    // Report any certificates already held for the requested keys.
    std::map<TxId, Certificate> found;
    for (const auto& key : rqt.object_keys) {
        auto it = lock_db_.find(key);
        if (it != lock_db_.end()) found.emplace(it->second.tx.id(), it->second);
    }
    std::vector<Certificate> found_list;
    for (auto& [txid, cert] : found) found_list.push_back(cert);

    if (!rqt.multi_object()) {
        // Single-object flavor: the key moves to the consensus path whether or
        // not an execution was reported.
        for (const auto& key : rqt.object_keys) {
            if (unlock_state(key) == UnlockState::none) outcome.newly_unlocked.push_back(key);
            set_unlock_state(key, UnlockState::unlocked);
        }
    } else if (found.empty()) {
        // Multi-object flavor blocks the fast path only on a clean no-commit.
        for (const auto& key : rqt.object_keys) {
            if (unlock_state(key) == UnlockState::none) outcome.newly_unlocked.push_back(key);
            set_unlock_state(key, UnlockState::unlocked);
        }
    }

    sign_locks_.emplace(rqt.gas, rqtd); // gas is reserved for this unlock
    auto vote = make_unlock_vote(self_, rqtd, std::move(found_list));
    vote_by_rqt_.emplace(rqtd, vote);
    outcome.vote = std::move(vote);
    return outcome;
}

UnlockCertOutcome ObjectValidator::process_unlock_cert(const UnlockCert& ucert) {
    UnlockCertOutcome outcome;
    const Digest ucert_digest = ucert.digest();
    if (processed_ucerts_.count(ucert_digest) > 0) {
        outcome.skipped = true;
        return outcome;
    }
    if (!validate_unlock_cert(ucert, committee_)) {
        outcome.error = OwnedError::invalid_cert;
        return outcome;
    }

    // The quorum of votes doubles as the gas certificate; the gas object is
    // spent before anything else, even if the unlock turns out to be moot.
    if (gas_spent_for_.insert(ucert.rqt.signing_digest()).second) {
        const OwnedObject* gas = find_object(ucert.rqt.gas.object);
        if (gas != nullptr && gas->version == ucert.rqt.gas.version) {
            objects_.erase(ucert.rqt.gas.object);
            outcome.gas_spent = true;
        }
    }

    for (const auto& key : ucert.rqt.object_keys) {
        if (unlock_state(key) == UnlockState::confirmed) {
            outcome.skipped = true;
            return outcome;
        }
    }
    processed_ucerts_.insert(ucert_digest);

    auto undo_on = [&](const ObjectKey& key) {
        auto locked = lock_db_.find(key);
        if (locked == lock_db_.end()) return;
        const TxId txid = locked->second.tx.id();
        if (snapshots_.count(txid) > 0 && executed_.count(txid) > 0) {
            undo_fast_execution(txid);
            outcome.undone.push_back(txid);
        }
    };

    if (!ucert.no_commit()) {
        // Adopt the reported execution(s): every embedded certificate runs to
        // completion on the consensus path.
        for (const auto& cert : ucert.certs) {
            const TxId txid = cert.tx.id();
            if (executed_.count(txid) == 0 && inputs_live(cert.tx)) {
                outcome.effects.push_back(execute_tx(cert.tx, &cert, /*fast_path=*/false));
                outcome.executed.push_back(txid);
            } else if (executed_.count(txid) > 0) {
                snapshots_.erase(txid); // sequenced now, beyond undo
            }
            for (const auto& key : cert.tx.input_keys()) set_unlock_state(key, UnlockState::confirmed);
        }
        if (!ucert.rqt.multi_object()) {
            for (const auto& key : ucert.rqt.object_keys)
                set_unlock_state(key, UnlockState::confirmed);
        }
    } else if (ucert.rqt.multi_object()) {
        // No execution anywhere: roll back any local fast-path execution and
        // run the replacement transaction instead.
        for (const auto& key : ucert.rqt.object_keys) undo_on(key);
        const Transaction& replacement = *ucert.rqt.replacement;
        if (executed_.count(replacement.id()) == 0 && inputs_live(replacement)) {
            outcome.effects.push_back(execute_tx(replacement, nullptr, /*fast_path=*/false));
            outcome.executed.push_back(replacement.id());
        }
        for (const auto& key : ucert.rqt.object_keys) set_unlock_state(key, UnlockState::confirmed);
    } else {
        // Single-object no-commit: undo one layer if needed, then a no-op that
        // only advances the key's version.
        for (const auto& key : ucert.rqt.object_keys) {
            undo_on(key);
            auto obj = objects_.find(key.object);
            if (obj != objects_.end() && obj->second.version == key.version) {
                VersionId bumped = tagged_digest("unlock/noop", [&](Encoder& enc) {
                    enc.digest(ucert_digest);
                    enc.digest(key.object);
                });
                obj->second.version = bumped;
                owners_at_[ObjectKey{key.object, bumped}] = obj->second.owners;
                noop_bumped_.insert(key);
                outcome.noop_executed = true;
                Encoder enc;
                ObjectKey{key.object, bumped}.encode(enc);
                outcome.effects.push_back(make_effect_sign(self_, ucert_digest, enc.digest_of()));
            }
            set_unlock_state(key, UnlockState::confirmed);
        }
    }
    return outcome;
}

ConsensusExecOutcome ObjectValidator::consensus_cert_execute(const Certificate& cert) {
    ConsensusExecOutcome outcome;
    if (!cert.tx.is_owned() || !validate_certificate(cert, committee_)) {
        outcome.error = OwnedError::invalid_cert;
        return outcome;
    }
    for (const auto& key : cert.tx.input_keys()) {
        if (unlock_state(key) == UnlockState::confirmed && executed_.count(cert.tx.id()) == 0) {
            outcome.skipped = true;
            return outcome;
        }
    }
    const TxId txid = cert.tx.id();
    if (executed_.count(txid) > 0) {
        // Already ran on the fast path; the sequenced delivery pins it so no
        // later unlock can touch these keys.
        for (const auto& key : cert.tx.input_keys()) set_unlock_state(key, UnlockState::confirmed);
        snapshots_.erase(txid); // beyond undo from here on
        outcome.confirmed_only = true;
        return outcome;
    }
    if (!inputs_live(cert.tx)) {
        outcome.error = OwnedError::not_executable;
        return outcome;
    }
    outcome.effect = execute_tx(cert.tx, &cert, /*fast_path=*/false);
    outcome.executed = true;
    for (const auto& key : cert.tx.input_keys()) set_unlock_state(key, UnlockState::confirmed);
    return outcome;
}

} // namespace fastpath
