#include "fastpath/bc_validator.hpp"

#include <algorithm>

namespace fastpath {

const char* to_string(BcError err) {
    switch (err) {
    case BcError::none: return "none";
    case BcError::invalid_input: return "invalid-input";
    case BcError::invalid_auth: return "invalid-auth";
    case BcError::wrong_version: return "wrong-version";
    case BcError::budget_exhausted: return "budget-exhausted";
    case BcError::frozen: return "frozen";
    case BcError::stale_version: return "stale-version";
    case BcError::uncertified_prev_tx: return "uncertified-prev-tx";
    case BcError::version_mismatch_in_prev_txs: return "version-mismatch-in-prev-txs";
    case BcError::current_version_not_merged: return "current-version-not-merged";
    case BcError::incomplete_history: return "incomplete-history";
    case BcError::invalid_certificate: return "invalid-certificate";
    }
    return "unknown";
}

BcValidatorState::BcValidatorState(const CounterGenesis& genesis, const Committee& committee,
                                   ValidatorId self, std::optional<Quantity> eta_override)
    : genesis_(genesis),
      committee_(committee),
      self_(self),
      eta_(eta_override.value_or(committee.eta())),
      version_(genesis.v0()),
      budget_(eta_ * genesis.initial_balance),
      requests_(genesis.v0()) {
    if (genesis.initial_balance.is_negative())
        throw std::invalid_argument("counter balance must be non-negative");
}

BcError BcValidatorState::validate_signing(const Transaction& tx) const {
    if (frozen_) return BcError::frozen;
    if (tx.signers.empty() || !tx.signatures_complete()) return BcError::invalid_auth;
    for (auto s : tx.signers)
        if (genesis_.owners.count(s) == 0) return BcError::invalid_auth;
    if (tx.is_bc_update()) {
        if (tx.bc().counter != genesis_.id()) return BcError::invalid_input;
        if (tx.bc().version != version_) return BcError::wrong_version;
        if ((budget_ + tx.bc().delta).is_negative()) return BcError::budget_exhausted;
        return BcError::none;
    }
    if (tx.is_convert()) {
        if (tx.convert().counter != genesis_.id()) return BcError::invalid_input;
        if (tx.convert().prev_version != version_) return BcError::wrong_version;
        return BcError::none;
    }
    return BcError::invalid_input;
}

BcResult<ValidatorSig> BcValidatorState::process_tx(const Transaction& tx) {
    const TxId id = tx.id();
    if (auto it = sig_by_tx_.find(id); it != sig_by_tx_.end())
        return BcResult<ValidatorSig>::success(it->second); // idempotent resubmission
    if (BcError err = validate_signing(tx); err != BcError::none)
        return BcResult<ValidatorSig>::failure(err);
    if (tx.is_bc_update() && tx.bc().delta.is_negative())
        budget_ += tx.bc().delta;
    signed_.insert(id);
    tx_table_.emplace(id, tx);
    auto sig = make_validator_sig(self_, id);
    sig_by_tx_.emplace(id, sig);
    return BcResult<ValidatorSig>::success(sig);
}

bool BcValidatorState::prerequisites_executed(const Transaction& tx) const {
    VersionId base;
    const std::set<TxId>* extra = nullptr;
    if (tx.is_bc_update()) {
        base = tx.bc().version;
    } else {
        base = tx.convert().prev_version;
        extra = &tx.convert().prev_txs;
    }
    std::set<TxId> required;
    try {
        required = history_of(base, requests_);
    } catch (const HistoryError&) {
        return false; // version ancestry not known yet
    }
    if (extra) required.insert(extra->begin(), extra->end());
    return std::all_of(required.begin(), required.end(),
                       [&](const TxId& t) { return executed_.count(t) > 0; });
}

void BcValidatorState::execute_now(const Certificate& cert, std::vector<BcExecution>& out) {
    const TxId id = cert.tx.id();
    executed_.insert(id);
    BcExecution exec;
    exec.tx = id;
    if (cert.tx.is_convert()) {
        const auto& conv = cert.tx.convert();
        std::set<TxId> spent = history_of(conv.prev_version, requests_);
        spent.insert(conv.prev_txs.begin(), conv.prev_txs.end());
        Quantity remaining = genesis_.initial_balance + val(tx_table_, spent);
        OwnedOutput output;
        output.object = tagged_digest("convert/object", [&](Encoder& enc) { enc.digest(genesis_.id()); });
        output.owners = genesis_.owners;
        output.balance = remaining;
        frozen_ = true;
        exec.conversion_output = output;
        exec.conversion_key = ObjectKey{output.object, cert.tx.output_version_for(output.object)};
        ObjectKey key = *exec.conversion_key;
        exec.effect = make_effect_sign(self_, id, tagged_digest("bc/converted", [&](Encoder& enc) {
                                           key.encode(enc);
                                           remaining.encode(enc);
                                       }));
    } else {
        exec.effect = make_effect_sign(self_, id, tagged_digest("bc/executed", [&](Encoder& enc) {
                                           enc.digest(id);
                                       }));
    }
    out.push_back(std::move(exec));
}

void BcValidatorState::drain_pending(std::vector<BcExecution>& out) {
    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (auto it = pending_certs_.begin(); it != pending_certs_.end();) {
            if (executed_.count(it->second.tx.id()) > 0) {
                it = pending_certs_.erase(it);
            } else if (prerequisites_executed(it->second.tx)) {
                Certificate cert = it->second;
                it = pending_certs_.erase(it);
                execute_now(cert, out);
                progressed = true;
                break; // re-scan from the start, new executions unblock earlier entries
            } else {
                ++it;
            }
        }
    }
}

BcCertOutcome BcValidatorState::process_cert(const Certificate& cert) {
    BcCertOutcome outcome;
    const TxId txid = cert.tx.id();
    const Digest cert_digest = cert.digest();
    if (executed_.count(txid) > 0 || processed_.count(cert_digest) > 0) {
        outcome.duplicate = true;
        return outcome;
    }
    bool on_counter = (cert.tx.is_bc_update() && cert.tx.bc().counter == genesis_.id()) ||
                      (cert.tx.is_convert() && cert.tx.convert().counter == genesis_.id());
    if (!on_counter) {
        outcome.error = BcError::invalid_input;
        return outcome;
    }
    if (!validate_certificate(cert, committee_)) {
        outcome.error = BcError::invalid_certificate;
        return outcome;
    }
    processed_.insert(cert_digest);
    outcome.first_seen = certified_.count(txid) == 0;
    if (outcome.first_seen) {
        certified_.emplace(txid, cert); // alternate quorums are the same certificate
        tx_table_.emplace(txid, cert.tx);
    }
    if (prerequisites_executed(cert.tx)) {
        execute_now(cert, outcome.executed);
        drain_pending(outcome.executed);
    } else {
        pending_certs_.emplace(cert_digest, cert);
        outcome.parked = true;
    }
    return outcome;
}

void BcValidatorState::learn_request(const VersionRequest& req) {
    if (req.counter != genesis_.id()) return;
    if (genesis_.owners.count(req.requester) == 0) return;
    if (req.sig.signer != req.requester || req.sig.message != req.signing_digest() || !verify(req.sig))
        return;
    requests_.add(req);
}

BcError BcValidatorState::check_update_batch(const VersionUpdateBody& body) const {
    for (const auto& txid : body.prev_txs) {
        auto cert = certified_.find(txid);
        if (cert == certified_.end()) return BcError::uncertified_prev_tx;
        const Transaction& tx = cert->second.tx;
        if (!tx.is_bc_update() || tx.bc().counter != genesis_.id() ||
            tx.bc().version != body.prev_version)
            return BcError::version_mismatch_in_prev_txs;
    }
    return BcError::none;
}

BcError BcValidatorState::collect_pending_history(const VersionRequest& req, std::vector<TxId>& out,
                                                  std::set<VersionId>& vetted) const {
    // Walk every ancestor request reachable from the merged versions. Branches
    // this validator never vetted get the same certification checks a version
    // update would.
    std::set<VersionId> visited;
    std::vector<VersionId> stack(req.merge().prev_versions.begin(), req.merge().prev_versions.end());
    std::set<TxId> pending;
    while (!stack.empty()) {
        VersionId v = stack.back();
        stack.pop_back();
        if (v == requests_.root() || !visited.insert(v).second) continue;
        const VersionRequest* ancestor = requests_.find(v);
        if (ancestor == nullptr) return BcError::incomplete_history;
        if (ancestor->is_update()) {
            if (validated_requests_.count(v) == 0) {
                if (BcError err = check_update_batch(ancestor->update()); err != BcError::none)
                    return err;
                vetted.insert(v);
            }
            for (const auto& txid : ancestor->update().prev_txs)
                if (budget_counted_.count(txid) == 0) pending.insert(txid);
            stack.push_back(ancestor->update().prev_version);
        } else {
            for (const auto& p : ancestor->merge().prev_versions) stack.push_back(p);
        }
    }
    out.assign(pending.begin(), pending.end());
    return BcError::none;
}

void BcValidatorState::apply_budget_for(const TxId& txid) {
    if (!budget_counted_.insert(txid).second) return;
    const Transaction& tx = tx_table_.at(txid);
    const Quantity& delta = tx.bc().delta;
    budget_ += eta_ * delta;
    if (signed_.count(txid) > 0 && delta.is_negative())
        budget_ -= delta; // reclaim what signing deducted
}

BcRequestOutcome BcValidatorState::process_version_request(const VersionRequest& req) {
    BcRequestOutcome outcome;
    const Digest req_digest = req.signing_digest();
    if (processed_.count(req_digest) > 0) {
        outcome.duplicate = true;
        return outcome;
    }
    if (frozen_) {
        outcome.error = BcError::frozen;
        return outcome;
    }
    if (req.counter != genesis_.id() || genesis_.owners.count(req.requester) == 0 ||
        req.sig.signer != req.requester || req.sig.message != req_digest || !verify(req.sig)) {
        outcome.error = BcError::invalid_auth;
        return outcome;
    }

    if (req.is_update()) {
        if (req.update().prev_version != version_) {
            outcome.error = BcError::stale_version;
            return outcome;
        }
        if (BcError err = check_update_batch(req.update()); err != BcError::none) {
            outcome.error = err;
            return outcome;
        }
        for (const auto& txid : req.update().prev_txs) apply_budget_for(txid);
    } else {
        if (req.merge().prev_versions.empty() || req.merge().prev_versions.count(version_) == 0) {
            outcome.error = BcError::current_version_not_merged;
            return outcome;
        }
        std::vector<TxId> pending;
        std::set<VersionId> vetted;
        if (BcError err = collect_pending_history(req, pending, vetted); err != BcError::none) {
            outcome.error = err;
            return outcome;
        }
        validated_requests_.insert(vetted.begin(), vetted.end());
        for (const auto& txid : pending) apply_budget_for(txid);
    }

    requests_.add(req);
    validated_requests_.insert(req.new_version());
    processed_.insert(req_digest);
    version_ = req.new_version();
    outcome.adopted = true;
    drain_pending(outcome.executed);
    return outcome;
}

void BcValidatorState::encode(Encoder& enc) const {
    enc.digest(version_);
    budget_.encode(enc);
    enc.boolean(frozen_);
    enc.seq(signed_, [](Encoder& e, const TxId& t) { e.digest(t); });
    enc.seq(executed_, [](Encoder& e, const TxId& t) { e.digest(t); });
    enc.seq(budget_counted_, [](Encoder& e, const TxId& t) { e.digest(t); });
    enc.u64(pending_certs_.size());
    for (const auto& [d, c] : pending_certs_) enc.digest(d);
    enc.u64(requests_.all().size());
    for (const auto& [v, r] : requests_.all()) enc.digest(v);
}

} // namespace fastpath
