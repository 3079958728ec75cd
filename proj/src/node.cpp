#include "fastpath/node.hpp"

namespace fastpath {

namespace {

Digest bc_result_digest(const TxId& txid) {
    return tagged_digest("bc/executed", [&](Encoder& enc) { enc.digest(txid); });
}

Digest owned_result_digest(const Transaction& tx) {
    Encoder enc;
    enc.seq(tx.output_keys(), [](Encoder& e, const ObjectKey& k) { k.encode(e); });
    return enc.digest_of();
}

} // namespace

ValidatorNode::ValidatorNode(Committee committee, ValidatorId self, SimFlags flags)
    : committee_(committee), self_(self), flags_(flags), owned_(committee, self) {
    if (flags_.disable_unlock_refusal) owned_.set_unlocked_refusal(false);
}

void ValidatorNode::add_counter(const CounterGenesis& genesis,
                                std::optional<Quantity> eta_override) {
    counters_.emplace(genesis.id(), BcValidatorState(genesis, committee_, self_, eta_override));
}

void ValidatorNode::add_object(const ObjectGenesis& genesis) {
    owned_.install_genesis(genesis);
}

BcValidatorState* ValidatorNode::counter_for_tx(const Transaction& tx) {
    CounterId id;
    if (tx.is_bc_update())
        id = tx.bc().counter;
    else if (tx.is_convert())
        id = tx.convert().counter;
    else
        return nullptr;
    auto it = counters_.find(id);
    return it == counters_.end() ? nullptr : &it->second;
}

void ValidatorNode::emit_effect(const EffectSign& effect, const std::set<OwnerId>& recipients,
                                std::uint64_t now, Trace& trace, std::vector<Outbound>& out) {
    trace.effects.push_back(effect);
    auto& ev = trace.push(TraceKind::effect_emitted, now, Address::validator(self_));
    ev.a = effect.subject;
    ev.b = effect.result;
    for (auto owner : recipients)
        out.push_back(Outbound{Address::user(owner), MsgEffectSign{effect}});
}

std::vector<VersionRequest> ValidatorNode::chain_for(const BcValidatorState& state,
                                                     const VersionId& version) const {
    std::vector<VersionRequest> chain;
    std::set<VersionId> visited;
    std::vector<VersionId> stack{version};
    while (!stack.empty()) {
        VersionId v = stack.back();
        stack.pop_back();
        if (v == state.requests().root() || !visited.insert(v).second) continue;
        const VersionRequest* req = state.requests().find(v);
        if (req == nullptr) continue;
        chain.push_back(*req);
        for (const auto& p : req->parents()) stack.push_back(p);
    }
    std::reverse(chain.begin(), chain.end()); // roots first
    return chain;
}

void ValidatorNode::note_bc_executions(const std::vector<BcExecution>& execs,
                                       const BcValidatorState& state, std::uint64_t now,
                                       Trace& trace, std::vector<Outbound>& out) {
    for (const auto& exec : execs) {
        const Transaction& tx = state.tx_table().at(exec.tx);
        if (exec.conversion_output) {
            owned_.install_object(*exec.conversion_key, *exec.conversion_output);
            auto& ev = trace.push(TraceKind::conversion_executed, now, Address::validator(self_));
            ev.a = exec.tx;
            ev.b = state.genesis().id();
            ev.amount = exec.conversion_output->balance;
        } else {
            auto& ev = trace.push(TraceKind::cert_executed, now, Address::validator(self_));
            ev.a = exec.tx;
            ev.b = state.genesis().id();
        }
        emit_effect(exec.effect, tx.signers, now, trace, out);
    }
}

std::vector<Outbound> ValidatorNode::handle_byzantine(const Envelope& env) {
    std::vector<Outbound> out;
    if (strategy_ == ByzStrategy::abstain) return out;
    // sign_anything: answer every signing request affirmatively, with no
    // budget, version or lock checks. State is never consulted.
    if (const auto* submit = std::get_if<MsgSubmitTx>(&env.payload)) {
        MsgTxResponse resp;
        resp.tx = submit->tx.id();
        resp.sig = make_validator_sig(self_, resp.tx);
        out.push_back(Outbound{env.from, resp});
    } else if (const auto* vreq = std::get_if<MsgVersionRequest>(&env.payload)) {
        out.push_back(Outbound{env.from, MsgVersionAck{vreq->req.signing_digest(), true, 0}});
    } else if (const auto* ureq = std::get_if<MsgUnlockRqt>(&env.payload)) {
        auto vote = make_unlock_vote(self_, ureq->rqt.signing_digest(), {});
        out.push_back(Outbound{env.from, MsgUnlockVote{ureq->rqt.signing_digest(), vote, 0}});
    } else if (const auto* certmsg = std::get_if<MsgSubmitCert>(&env.payload)) {
        const Transaction& tx = certmsg->cert.tx;
        if (tx.is_bc_update()) {
            auto effect = make_effect_sign(self_, tx.id(), bc_result_digest(tx.id()));
            for (auto owner : tx.signers)
                out.push_back(Outbound{Address::user(owner), MsgEffectSign{effect}});
        } else if (tx.is_owned()) {
            auto effect = make_effect_sign(self_, tx.id(), owned_result_digest(tx));
            for (auto owner : tx.signers)
                out.push_back(Outbound{Address::user(owner), MsgEffectSign{effect}});
        }
    }
    return out;
}

std::vector<Outbound> ValidatorNode::handle(const Envelope& env, std::uint64_t now, Trace& trace) {
    if (crashed_) return {};
    if (strategy_ != ByzStrategy::honest) return handle_byzantine(env);
    return handle_honest(env, now, trace);
}

std::vector<Outbound> ValidatorNode::handle_honest(const Envelope& env, std::uint64_t now,
                                                   Trace& trace) {
    std::vector<Outbound> out;
    const Address self = Address::validator(self_);

    if (const auto* submit = std::get_if<MsgSubmitTx>(&env.payload)) {
        const Transaction& tx = submit->tx;
        MsgTxResponse resp;
        resp.tx = tx.id();
        if (tx.is_owned()) {
            auto res = owned_.process_tx(tx);
            if (res.ok()) {
                resp.sig = *res.value;
                trace.push(TraceKind::owned_signed, now, self).a = resp.tx;
            } else {
                resp.owned_error = static_cast<std::uint8_t>(res.error);
                auto& ev = trace.push(TraceKind::owned_sign_rejected, now, self);
                ev.a = resp.tx;
                ev.extra = resp.owned_error;
            }
        } else if (BcValidatorState* state = counter_for_tx(tx)) {
            auto res = state->process_tx(tx);
            if (res.ok()) {
                resp.sig = *res.value;
                auto& ev = trace.push(TraceKind::bc_signed, now, self);
                ev.a = resp.tx;
                ev.b = state->genesis().id();
                ev.amount = state->budget();
            } else {
                resp.bc_error = static_cast<std::uint8_t>(res.error);
                auto& ev = trace.push(TraceKind::bc_sign_rejected, now, self);
                ev.a = resp.tx;
                ev.extra = resp.bc_error;
            }
        } else {
            resp.bc_error = static_cast<std::uint8_t>(BcError::invalid_input);
        }
        out.push_back(Outbound{env.from, resp});
        return out;
    }

    if (const auto* certmsg = std::get_if<MsgSubmitCert>(&env.payload)) {
        const Certificate& cert = certmsg->cert;
        if (cert.tx.is_owned()) {
            auto outcome = owned_.process_cert(cert);
            if (outcome.effect) {
                trace.record_cert(cert);
                trace.push(TraceKind::owned_executed, now, self).a = cert.tx.id();
                emit_effect(*outcome.effect, cert.tx.signers, now, trace, out);
                if (flags_.rebroadcast)
                    for (std::uint32_t v = 0; v < committee_.n(); ++v)
                        if (v != self_.index)
                            out.push_back(Outbound{Address::validator(ValidatorId{v}), *certmsg});
            } else if (outcome.refused) {
                trace.push(TraceKind::owned_exec_refused, now, self).a = cert.tx.id();
            } else if (!outcome.duplicate) {
                auto& ev = trace.push(TraceKind::cert_rejected, now, self);
                ev.a = cert.tx.id();
                ev.extra = static_cast<std::uint8_t>(outcome.error);
            }
            return out;
        }
        BcValidatorState* state = counter_for_tx(cert.tx);
        if (state == nullptr) return out;
        for (const auto& req : certmsg->supporting_requests) state->learn_request(req);
        auto outcome = state->process_cert(cert);
        if (outcome.error != BcError::none) {
            auto& ev = trace.push(TraceKind::cert_rejected, now, self);
            ev.a = cert.tx.id();
            ev.extra = static_cast<std::uint8_t>(outcome.error);
            return out;
        }
        if (outcome.first_seen) trace.record_cert(cert);
        if (outcome.parked) {
            auto& ev = trace.push(TraceKind::cert_parked, now, self);
            ev.a = cert.tx.id();
            ev.b = state->genesis().id();
        }
        note_bc_executions(outcome.executed, *state, now, trace, out);
        if (outcome.first_seen && flags_.rebroadcast) {
            MsgSubmitCert fwd{cert, {}};
            if (cert.tx.is_bc_update())
                fwd.supporting_requests = chain_for(*state, cert.tx.bc().version);
            else
                fwd.supporting_requests = chain_for(*state, cert.tx.convert().prev_version);
            for (std::uint32_t v = 0; v < committee_.n(); ++v)
                if (v != self_.index) out.push_back(Outbound{Address::validator(ValidatorId{v}), fwd});
        }
        return out;
    }

    if (const auto* vreq = std::get_if<MsgVersionRequest>(&env.payload)) {
        auto it = counters_.find(vreq->req.counter);
        if (it == counters_.end()) return out;
        BcValidatorState& state = it->second;
        for (const auto& req : vreq->supporting_requests) state.learn_request(req);
        for (const auto& cert : vreq->supporting_certs) {
            auto sup = state.process_cert(cert);
            if (sup.first_seen) trace.record_cert(cert);
            note_bc_executions(sup.executed, state, now, trace, out);
        }
        auto outcome = state.process_version_request(vreq->req);
        MsgVersionAck ack{vreq->req.signing_digest(), outcome.adopted || outcome.duplicate,
                          static_cast<std::uint8_t>(outcome.error)};
        if (outcome.adopted) {
            trace.record_request(vreq->req);
            auto& ev = trace.push(TraceKind::version_adopted, now, self);
            ev.a = state.version();
            ev.b = state.genesis().id();
            ev.amount = state.budget();
            note_bc_executions(outcome.executed, state, now, trace, out);
            if (flags_.rebroadcast) {
                MsgVersionRequest fwd = *vreq;
                for (std::uint32_t v = 0; v < committee_.n(); ++v)
                    if (v != self_.index)
                        out.push_back(Outbound{Address::validator(ValidatorId{v}), fwd});
            }
        } else if (!outcome.duplicate) {
            auto& ev = trace.push(TraceKind::version_rejected, now, self);
            ev.a = vreq->req.new_version();
            ev.b = vreq->req.counter;
            ev.extra = static_cast<std::uint8_t>(outcome.error);
        }
        out.push_back(Outbound{env.from, ack});
        return out;
    }

    if (const auto* ureq = std::get_if<MsgUnlockRqt>(&env.payload)) {
        auto outcome = owned_.process_unlock_rqt(ureq->rqt);
        MsgUnlockVote resp{ureq->rqt.signing_digest(), outcome.vote,
                           static_cast<std::uint8_t>(outcome.error)};
        if (outcome.vote) {
            auto& ev = trace.push(TraceKind::unlock_vote_emitted, now, self);
            ev.a = resp.rqt;
            ev.extra = static_cast<std::uint32_t>(outcome.vote->found.size());
            for (const auto& key : outcome.newly_unlocked) {
                auto& uev = trace.push(TraceKind::unlock_db_unlocked, now, self);
                uev.a = key.object;
                uev.c = key.version;
            }
        } else {
            auto& ev = trace.push(TraceKind::unlock_rejected, now, self);
            ev.a = resp.rqt;
            ev.extra = resp.error;
        }
        out.push_back(Outbound{env.from, resp});
        return out;
    }

    // Remaining kinds are user- or sequencer-bound; a validator ignores them.
    return out;
}

std::vector<Outbound> ValidatorNode::handle_seq_item(const SeqItem& item, std::size_t slot,
                                                     std::uint64_t now, Trace& trace) {
    std::vector<Outbound> out;
    if (crashed_ || strategy_ != ByzStrategy::honest) return out;
    const Address self = Address::validator(self_);
    auto& dev = trace.push(TraceKind::seq_delivered, now, self);
    dev.a = item.identity();
    dev.extra = static_cast<std::uint32_t>(slot);

    if (item.is_cert()) {
        const Certificate& cert = item.cert();
        if (cert.tx.is_owned()) {
            auto outcome = owned_.consensus_cert_execute(cert);
            if (outcome.executed) {
                trace.push(TraceKind::consensus_executed, now, self).a = cert.tx.id();
                for (const auto& key : cert.tx.input_keys()) {
                    auto& ev = trace.push(TraceKind::unlock_db_confirmed, now, self);
                    ev.a = key.object;
                    ev.c = key.version;
                }
                emit_effect(*outcome.effect, cert.tx.signers, now, trace, out);
            } else if (outcome.confirmed_only) {
                trace.push(TraceKind::consensus_confirmed_only, now, self).a = cert.tx.id();
            } else if (outcome.skipped) {
                trace.push(TraceKind::consensus_skipped, now, self).a = cert.tx.id();
            }
        } else if (BcValidatorState* state = counter_for_tx(cert.tx)) {
            auto outcome = state->process_cert(cert);
            note_bc_executions(outcome.executed, *state, now, trace, out);
        }
        return out;
    }

    const UnlockCert& ucert = item.unlock();
    auto outcome = owned_.process_unlock_cert(ucert);
    if (outcome.gas_spent) {
        auto& ev = trace.push(TraceKind::gas_spent, now, self);
        ev.a = ucert.rqt.signing_digest();
        ev.b = ucert.rqt.gas.object;
    }
    if (outcome.error != OwnedError::none) {
        auto& ev = trace.push(TraceKind::ucert_skipped, now, self);
        ev.a = ucert.digest();
        ev.extra = static_cast<std::uint8_t>(outcome.error);
        return out;
    }
    if (outcome.skipped) {
        trace.push(TraceKind::ucert_skipped, now, self).a = ucert.digest();
        return out;
    }
    trace.push(TraceKind::ucert_processed, now, self).a = ucert.digest();
    for (const auto& txid : outcome.undone)
        trace.push(TraceKind::undo_performed, now, self).a = txid;
    if (outcome.noop_executed) {
        auto& ev = trace.push(TraceKind::noop_executed, now, self);
        ev.a = ucert.digest();
        ev.b = ucert.rqt.object_keys.front().object;
    }
    for (const auto& txid : outcome.executed)
        trace.push(TraceKind::consensus_executed, now, self).a = txid;
    for (const auto& key : ucert.rqt.object_keys) {
        if (owned_.unlock_state(key) == UnlockState::confirmed) {
            auto& ev = trace.push(TraceKind::unlock_db_confirmed, now, self);
            ev.a = key.object;
            ev.c = key.version;
        }
    }
    for (const auto& effect : outcome.effects) {
        std::set<OwnerId> recipients{ucert.rqt.requester};
        auto tx = trace.txs.find(effect.subject);
        if (tx != trace.txs.end()) recipients.insert(tx->second.signers.begin(), tx->second.signers.end());
        emit_effect(effect, recipients, now, trace, out);
    }
    return out;
}

std::vector<Outbound> ValidatorNode::force_execute(const Certificate& cert, std::uint64_t now,
                                                   Trace& trace) {
    std::vector<Outbound> out;
    if (crashed_ || strategy_ != ByzStrategy::honest) return out;
    if (cert.tx.is_owned()) {
        auto outcome = owned_.consensus_cert_execute(cert);
        if (outcome.executed) {
            trace.push(TraceKind::consensus_executed, now, Address::validator(self_)).a =
                cert.tx.id();
            emit_effect(*outcome.effect, cert.tx.signers, now, trace, out);
        }
    } else if (BcValidatorState* state = counter_for_tx(cert.tx)) {
        auto outcome = state->process_cert(cert);
        note_bc_executions(outcome.executed, *state, now, trace, out);
    }
    return out;
}

void ValidatorNode::epoch_end(std::uint64_t now, Trace& trace) {
    if (crashed_ || strategy_ != ByzStrategy::honest) return;
    owned_.epoch_end();
    trace.push(TraceKind::epoch_ended, now, Address::validator(self_));
}

ValidatorSnapshot ValidatorNode::snapshot() const {
    ValidatorSnapshot snap;
    snap.id = self_.index;
    snap.crashed = crashed_;
    snap.corrupt = corrupt();
    for (const auto& [cid, state] : counters_) {
        CounterSnapshot cs;
        cs.version = state.version();
        cs.budget = state.budget();
        cs.frozen = state.frozen();
        cs.signed_txs = state.signed_txs();
        cs.executed = state.executed_txs();
        snap.counters.emplace(cid, std::move(cs));
    }
    snap.owned_executed = owned_.executed_txs();
    for (const auto& [oid, obj] : owned_.objects())
        snap.objects.emplace(oid, ObjectSnapshot{obj.version, obj.owners, obj.balance});
    for (const auto& [key, state] : owned_.unlock_db())
        snap.unlock_db.emplace(key, static_cast<std::uint8_t>(state));
    return snap;
}

void ValidatorNode::encode(Encoder& enc) const {
    enc.u32(self_.index);
    enc.boolean(crashed_);
    enc.u8(static_cast<std::uint8_t>(strategy_));
    enc.u64(counters_.size());
    for (const auto& [cid, state] : counters_) {
        enc.digest(cid);
        state.encode(enc);
    }
    owned_.encode(enc);
}

} // namespace fastpath
