#include "fastpath/trace.hpp"

#include <algorithm>
#include <ostream>

namespace fastpath {

const char* to_string(TraceKind kind) {
    switch (kind) {
    case TraceKind::msg_delivered: return "msg-delivered";
    case TraceKind::msg_dropped: return "msg-dropped";
    case TraceKind::bc_signed: return "bc-signed";
    case TraceKind::bc_sign_rejected: return "bc-sign-rejected";
    case TraceKind::cert_formed: return "cert-formed";
    case TraceKind::cert_executed: return "cert-executed";
    case TraceKind::cert_parked: return "cert-parked";
    case TraceKind::cert_rejected: return "cert-rejected";
    case TraceKind::version_adopted: return "version-adopted";
    case TraceKind::version_rejected: return "version-rejected";
    case TraceKind::conversion_executed: return "conversion-executed";
    case TraceKind::owned_signed: return "owned-signed";
    case TraceKind::owned_sign_rejected: return "owned-sign-rejected";
    case TraceKind::owned_executed: return "owned-executed";
    case TraceKind::owned_exec_refused: return "owned-exec-refused";
    case TraceKind::effect_emitted: return "effect-emitted";
    case TraceKind::effect_cert_formed: return "effect-cert-formed";
    case TraceKind::unlock_vote_emitted: return "unlock-vote-emitted";
    case TraceKind::unlock_rejected: return "unlock-rejected";
    case TraceKind::unlock_db_unlocked: return "unlock-db-unlocked";
    case TraceKind::unlock_db_confirmed: return "unlock-db-confirmed";
    case TraceKind::unlock_cert_formed: return "unlock-cert-formed";
    case TraceKind::sequenced: return "sequenced";
    case TraceKind::seq_delivered: return "seq-delivered";
    case TraceKind::ucert_processed: return "ucert-processed";
    case TraceKind::ucert_skipped: return "ucert-skipped";
    case TraceKind::undo_performed: return "undo-performed";
    case TraceKind::noop_executed: return "noop-executed";
    case TraceKind::gas_spent: return "gas-spent";
    case TraceKind::consensus_executed: return "consensus-executed";
    case TraceKind::consensus_skipped: return "consensus-skipped";
    case TraceKind::consensus_confirmed_only: return "consensus-confirmed-only";
    case TraceKind::crashed: return "crashed";
    case TraceKind::corrupted: return "corrupted";
    case TraceKind::epoch_ended: return "epoch-ended";
    case TraceKind::demand: return "demand";
    case TraceKind::user_rejected: return "user-rejected";
    case TraceKind::resend: return "resend";
    case TraceKind::truncated: return "truncated";
    }
    return "?";
}

void TraceEvent::encode(Encoder& enc) const {
    enc.u64(seq);
    enc.u64(time);
    enc.u8(static_cast<std::uint8_t>(kind));
    actor.encode(enc);
    enc.digest(a);
    enc.digest(b);
    enc.digest(c);
    amount.encode(enc);
    enc.u32(extra);
}

TraceEvent TraceEvent::decode(Decoder& dec) {
    TraceEvent ev;
    ev.seq = dec.u64();
    ev.time = dec.u64();
    ev.kind = static_cast<TraceKind>(dec.u8());
    ev.actor.kind = static_cast<Address::Kind>(dec.u8());
    ev.actor.id = dec.u32();
    ev.a = dec.digest();
    ev.b = dec.digest();
    ev.c = dec.digest();
    ev.amount = Quantity::decode(dec);
    ev.extra = dec.u32();
    return ev;
}

TraceTx TraceTx::from(const Transaction& tx) {
    TraceTx out;
    out.signers = tx.signers;
    if (tx.is_bc_update()) {
        out.kind = 0;
        out.counter = tx.bc().counter;
        out.version = tx.bc().version;
        out.delta = tx.bc().delta;
    } else if (tx.is_owned()) {
        out.kind = 1;
        out.inputs = tx.input_keys();
        out.outputs = tx.output_keys();
    } else {
        out.kind = 2;
        out.counter = tx.convert().counter;
        out.version = tx.convert().prev_version;
        out.prev_txs = tx.convert().prev_txs;
    }
    return out;
}

void TraceTx::encode(Encoder& enc) const {
    enc.u8(kind);
    enc.digest(counter);
    enc.digest(version);
    delta.encode(enc);
    enc.seq(inputs, [](Encoder& e, const ObjectKey& k) { k.encode(e); });
    enc.seq(outputs, [](Encoder& e, const ObjectKey& k) { k.encode(e); });
    enc.seq(signers, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
    enc.seq(prev_txs, [](Encoder& e, const TxId& t) { e.digest(t); });
}

TraceTx TraceTx::decode(Decoder& dec) {
    TraceTx out;
    out.kind = dec.u8();
    out.counter = dec.digest();
    out.version = dec.digest();
    out.delta = Quantity::decode(dec);
    for (auto n = dec.u64(); n > 0; --n) out.inputs.push_back(ObjectKey::decode(dec));
    for (auto n = dec.u64(); n > 0; --n) out.outputs.push_back(ObjectKey::decode(dec));
    for (auto n = dec.u64(); n > 0; --n) out.signers.insert(OwnerId{dec.u32()});
    for (auto n = dec.u64(); n > 0; --n) out.prev_txs.insert(dec.digest());
    return out;
}

TraceRequest TraceRequest::from(const VersionRequest& req) {
    TraceRequest out;
    out.counter = req.counter;
    out.version = req.new_version();
    out.is_update = req.is_update();
    out.parents = req.parents();
    if (req.is_update()) out.prev_txs = req.update().prev_txs;
    return out;
}

void TraceRequest::encode(Encoder& enc) const {
    enc.digest(counter);
    enc.digest(version);
    enc.boolean(is_update);
    enc.seq(parents, [](Encoder& e, const VersionId& v) { e.digest(v); });
    enc.seq(prev_txs, [](Encoder& e, const TxId& t) { e.digest(t); });
}

TraceRequest TraceRequest::decode(Decoder& dec) {
    TraceRequest out;
    out.counter = dec.digest();
    out.version = dec.digest();
    out.is_update = dec.boolean();
    for (auto n = dec.u64(); n > 0; --n) out.parents.insert(dec.digest());
    for (auto n = dec.u64(); n > 0; --n) out.prev_txs.insert(dec.digest());
    return out;
}

void TraceSeqItem::encode(Encoder& enc) const {
    enc.digest(identity);
    enc.boolean(is_unlock);
    enc.digest(cert_tx);
    enc.digest(rqt);
    enc.boolean(no_commit);
    enc.seq(embedded, [](Encoder& e, const TxId& t) { e.digest(t); });
    enc.seq(keys, [](Encoder& e, const ObjectKey& k) { k.encode(e); });
    gas.encode(enc);
}

TraceSeqItem TraceSeqItem::decode(Decoder& dec) {
    TraceSeqItem out;
    out.identity = dec.digest();
    out.is_unlock = dec.boolean();
    out.cert_tx = dec.digest();
    out.rqt = dec.digest();
    out.no_commit = dec.boolean();
    for (auto n = dec.u64(); n > 0; --n) out.embedded.push_back(dec.digest());
    for (auto n = dec.u64(); n > 0; --n) out.keys.push_back(ObjectKey::decode(dec));
    out.gas = ObjectKey::decode(dec);
    return out;
}

void CounterSnapshot::encode(Encoder& enc) const {
    enc.digest(version);
    budget.encode(enc);
    enc.boolean(frozen);
    enc.seq(signed_txs, [](Encoder& e, const TxId& t) { e.digest(t); });
    enc.seq(executed, [](Encoder& e, const TxId& t) { e.digest(t); });
}

CounterSnapshot CounterSnapshot::decode(Decoder& dec) {
    CounterSnapshot out;
    out.version = dec.digest();
    out.budget = Quantity::decode(dec);
    out.frozen = dec.boolean();
    for (auto n = dec.u64(); n > 0; --n) out.signed_txs.insert(dec.digest());
    for (auto n = dec.u64(); n > 0; --n) out.executed.insert(dec.digest());
    return out;
}

void ObjectSnapshot::encode(Encoder& enc) const {
    enc.digest(version);
    enc.seq(owners, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
    balance.encode(enc);
}

ObjectSnapshot ObjectSnapshot::decode(Decoder& dec) {
    ObjectSnapshot out;
    out.version = dec.digest();
    for (auto n = dec.u64(); n > 0; --n) out.owners.insert(OwnerId{dec.u32()});
    out.balance = Quantity::decode(dec);
    return out;
}

void ValidatorSnapshot::encode(Encoder& enc) const {
    enc.u32(id);
    enc.boolean(crashed);
    enc.boolean(corrupt);
    enc.u64(counters.size());
    for (const auto& [cid, snap] : counters) {
        enc.digest(cid);
        snap.encode(enc);
    }
    enc.seq(owned_executed, [](Encoder& e, const TxId& t) { e.digest(t); });
    enc.u64(objects.size());
    for (const auto& [oid, snap] : objects) {
        enc.digest(oid);
        snap.encode(enc);
    }
    enc.u64(unlock_db.size());
    for (const auto& [key, state] : unlock_db) {
        key.encode(enc);
        enc.u8(state);
    }
}

ValidatorSnapshot ValidatorSnapshot::decode(Decoder& dec) {
    ValidatorSnapshot out;
    out.id = dec.u32();
    out.crashed = dec.boolean();
    out.corrupt = dec.boolean();
    for (auto n = dec.u64(); n > 0; --n) {
        CounterId cid = dec.digest();
        out.counters.emplace(cid, CounterSnapshot::decode(dec));
    }
    for (auto n = dec.u64(); n > 0; --n) out.owned_executed.insert(dec.digest());
    for (auto n = dec.u64(); n > 0; --n) {
        ObjectId oid = dec.digest();
        out.objects.emplace(oid, ObjectSnapshot::decode(dec));
    }
    for (auto n = dec.u64(); n > 0; --n) {
        ObjectKey key = ObjectKey::decode(dec);
        out.unlock_db.emplace(key, dec.u8());
    }
    return out;
}

void CounterInfo::encode(Encoder& enc) const {
    enc.str(label);
    initial_balance.encode(enc);
    enc.digest(v0);
    enc.seq(owners, [](Encoder& e, const OwnerId& o) { e.u32(o.id); });
}

CounterInfo CounterInfo::decode(Decoder& dec) {
    CounterInfo out;
    out.label = dec.str();
    out.initial_balance = Quantity::decode(dec);
    out.v0 = dec.digest();
    for (auto n = dec.u64(); n > 0; --n) out.owners.insert(OwnerId{dec.u32()});
    return out;
}

TraceEvent& Trace::push(TraceKind kind, std::uint64_t time, Address actor) {
    TraceEvent ev;
    ev.seq = events.size();
    ev.time = time;
    ev.kind = kind;
    ev.actor = actor;
    events.push_back(ev);
    return events.back();
}

void Trace::record_tx(const Transaction& tx) {
    txs.emplace(tx.id(), TraceTx::from(tx));
}

void Trace::record_cert(const Certificate& cert) {
    record_tx(cert.tx);
    auto& endorsers = certified[cert.tx.id()];
    for (const auto& sig : cert.endorsements) endorsers.insert(sig.signer.index);
}

void Trace::record_request(const VersionRequest& req) {
    auto& list = requests[req.counter];
    auto rec = TraceRequest::from(req);
    for (const auto& existing : list)
        if (existing.version == rec.version) return;
    list.push_back(std::move(rec));
}

void Trace::record_seq_item(const SeqItem& item) {
    TraceSeqItem rec;
    rec.identity = item.identity();
    if (item.is_cert()) {
        rec.is_unlock = false;
        rec.cert_tx = item.cert().tx.id();
        rec.keys = item.cert().tx.input_keys();
        record_cert(item.cert());
    } else {
        const UnlockCert& ucert = item.unlock();
        rec.is_unlock = true;
        rec.rqt = ucert.rqt.signing_digest();
        rec.no_commit = ucert.no_commit();
        rec.keys = ucert.rqt.object_keys;
        rec.gas = ucert.rqt.gas;
        for (const auto& cert : ucert.certs) {
            rec.embedded.push_back(cert.tx.id());
            record_cert(cert);
        }
        if (ucert.rqt.replacement) record_tx(*ucert.rqt.replacement);
    }
    sequenced.push_back(std::move(rec));
}

std::set<std::uint32_t> Trace::honest_validators() const {
    std::set<std::uint32_t> honest;
    for (std::uint32_t v = 0; v < committee.n(); ++v)
        if (ever_corrupt.count(v) == 0) honest.insert(v);
    return honest;
}

std::map<Digest, std::set<std::uint32_t>> Trace::effect_certs() const {
    std::map<Digest, std::map<Digest, std::set<std::uint32_t>>> by_subject;
    for (const auto& es : effects) by_subject[es.subject][es.result].insert(es.validator.index);
    std::map<Digest, std::set<std::uint32_t>> out;
    for (const auto& [subject, results] : by_subject)
        for (const auto& [result, validators] : results)
            if (validators.size() >= committee.quorum_size()) out[subject] = validators;
    return out;
}

std::string Trace::label_of(const Digest& id) const {
    auto it = labels.find(id);
    return it == labels.end() ? id.short_hex() : it->second;
}

std::vector<std::uint8_t> Trace::canonical_bytes() const {
    Encoder enc;
    enc.str(scenario);
    enc.u64(seed);
    committee.encode(enc);
    enc.u64(end_time);
    enc.boolean(truncated);
    enc.u64(events.size());
    for (const auto& ev : events) ev.encode(enc);
    enc.u64(counters.size());
    for (const auto& [id, info] : counters) {
        enc.digest(id);
        info.encode(enc);
    }
    enc.u64(labels.size());
    for (const auto& [id, name] : labels) {
        enc.digest(id);
        enc.str(name);
    }
    enc.u64(txs.size());
    for (const auto& [id, tx] : txs) {
        enc.digest(id);
        tx.encode(enc);
    }
    enc.u64(certified.size());
    for (const auto& [id, endorsers] : certified) {
        enc.digest(id);
        enc.u64(endorsers.size());
        for (auto v : endorsers) enc.u32(v);
    }
    enc.u64(requests.size());
    for (const auto& [cid, list] : requests) {
        enc.digest(cid);
        enc.u64(list.size());
        for (const auto& req : list) req.encode(enc);
    }
    enc.u64(effects.size());
    for (const auto& es : effects) es.encode(enc);
    enc.u64(sequenced.size());
    for (const auto& item : sequenced) item.encode(enc);
    enc.u64(finals.size());
    for (const auto& snap : finals) snap.encode(enc);
    enc.u64(ever_corrupt.size());
    for (auto v : ever_corrupt) enc.u32(v);
    return enc.data();
}

Digest Trace::digest() const {
    auto bytes = canonical_bytes();
    return sha256(std::span<const std::uint8_t>(bytes.data(), bytes.size()));
}

Trace Trace::from_bytes(std::span<const std::uint8_t> bytes) {
    Decoder dec(bytes);
    Trace out;
    out.scenario = dec.str();
    out.seed = dec.u64();
    out.committee = Committee(dec.u32());
    out.end_time = dec.u64();
    out.truncated = dec.boolean();
    for (auto n = dec.u64(); n > 0; --n) out.events.push_back(TraceEvent::decode(dec));
    for (auto n = dec.u64(); n > 0; --n) {
        CounterId id = dec.digest();
        out.counters.emplace(id, CounterInfo::decode(dec));
    }
    for (auto n = dec.u64(); n > 0; --n) {
        Digest id = dec.digest();
        out.labels.emplace(id, dec.str());
    }
    for (auto n = dec.u64(); n > 0; --n) {
        TxId id = dec.digest();
        out.txs.emplace(id, TraceTx::decode(dec));
    }
    for (auto n = dec.u64(); n > 0; --n) {
        TxId id = dec.digest();
        std::set<std::uint32_t> endorsers;
        for (auto k = dec.u64(); k > 0; --k) endorsers.insert(dec.u32());
        out.certified.emplace(id, std::move(endorsers));
    }
    for (auto n = dec.u64(); n > 0; --n) {
        CounterId cid = dec.digest();
        std::vector<TraceRequest> list;
        for (auto k = dec.u64(); k > 0; --k) list.push_back(TraceRequest::decode(dec));
        out.requests.emplace(cid, std::move(list));
    }
    for (auto n = dec.u64(); n > 0; --n) {
        EffectSign es;
        es.validator.index = dec.u32();
        es.subject = dec.digest();
        es.result = dec.digest();
        es.sig = ValidatorSig::decode(dec);
        out.effects.push_back(es);
    }
    for (auto n = dec.u64(); n > 0; --n) out.sequenced.push_back(TraceSeqItem::decode(dec));
    for (auto n = dec.u64(); n > 0; --n) out.finals.push_back(ValidatorSnapshot::decode(dec));
    for (auto n = dec.u64(); n > 0; --n) out.ever_corrupt.insert(dec.u32());
    return out;
}

void render_text(const Trace& trace, std::ostream& out) {
    out << "scenario " << trace.scenario << " seed " << trace.seed << " n " << trace.committee.n()
        << " f " << trace.committee.f() << " end " << trace.end_time << "\n";
    for (const auto& ev : trace.events) {
        out << ev.seq << "\tt=" << ev.time << "\t" << to_string(ev.kind) << "\t"
            << ev.actor.render();
        if (!ev.a.is_zero()) out << "\ta=" << trace.label_of(ev.a);
        if (!ev.b.is_zero()) out << "\tb=" << trace.label_of(ev.b);
        if (!ev.c.is_zero()) out << "\tc=" << trace.label_of(ev.c);
        if (!ev.amount.is_zero()) out << "\tamount=" << ev.amount.to_string();
        if (ev.extra != 0) out << "\textra=" << ev.extra;
        out << "\n";
    }
    out << "-- final state --\n";
    for (const auto& snap : trace.finals) {
        out << "val" << snap.id << (snap.crashed ? " crashed" : "")
            << (snap.corrupt ? " corrupt" : "");
        for (const auto& [cid, cs] : snap.counters)
            out << "  [" << trace.label_of(cid) << " bud=" << cs.budget.to_string()
                << " executed=" << cs.executed.size() << (cs.frozen ? " frozen" : "") << "]";
        out << " owned_executed=" << snap.owned_executed.size() << "\n";
    }
}

} // namespace fastpath
