#include "fastpath/bc_user.hpp"

namespace fastpath {

BcUserState::BcUserState(const CounterGenesis& genesis, const Committee& committee, OwnerId self,
                         Quantity min_budget)
    : genesis_(genesis),
      eta_(committee.eta()),
      self_(self),
      min_budget_(std::move(min_budget)),
      version_(genesis.v0()),
      budget_(eta_ * genesis.initial_balance) {}

Transaction BcUserState::build_tx(const Quantity& delta) {
    Transaction tx;
    tx.command = BcUpdate{genesis_.id(), version_, delta};
    tx.nonce = nonce_++;
    tx.signers = {self_};
    tx.sign_by(self_);
    return tx;
}

UserUpdateOutcome BcUserState::user_update(const Quantity& delta) {
    UserUpdateOutcome outcome;
    if (converted_) {
        outcome.rejected = true;
        return outcome;
    }
    if ((budget_ + delta).is_negative())
        outcome.emitted.push_back(user_version_update());
    if (converted_ || (budget_ + delta).is_negative()) {
        outcome.rejected = true;
        return outcome;
    }
    Transaction tx = build_tx(delta);
    if (delta.is_negative()) budget_ += delta;
    sent_txs_.push_back(tx);
    outcome.emitted.push_back(UserEmission{std::move(tx), std::nullopt});
    return outcome;
}

UserEmission BcUserState::user_version_update() {
    std::set<TxId> sent_ids;
    for (const auto& tx : sent_txs_) sent_ids.insert(tx.id());

    Quantity recomputed = budget_;
    for (const auto& tx : sent_txs_) {
        const Quantity& delta = tx.bc().delta;
        recomputed += eta_ * delta;
        if (delta.is_negative()) recomputed -= delta;
    }

    UserEmission emission;
    if (recomputed >= min_budget_) {
        VersionRequest req;
        req.counter = genesis_.id();
        req.body = VersionUpdateBody{version_, sent_ids};
        req.requester = self_;
        req.sig = make_owner_sig(self_, req.signing_digest());
        budget_ = recomputed;
        version_ = req.new_version();
        sent_txs_.clear(); // the next update's batch is exactly the new version's txs
        ++version_updates_sent_;
        emission.request = std::move(req);
    } else {
        Transaction convert;
        convert.command = ConvertToOwned{genesis_.id(), version_, sent_ids};
        convert.nonce = nonce_++;
        convert.signers = {self_};
        convert.sign_by(self_);
        budget_ = recomputed;
        converted_ = true;
        emission.tx = std::move(convert);
    }
    return emission;
}

std::optional<Certificate> collect_certificate(const Transaction& tx,
                                               const std::vector<ValidatorSig>& sigs,
                                               const Committee& committee) {
    const TxId id = tx.id();
    std::map<ValidatorId, ValidatorSig> usable;
    for (const auto& sig : sigs) {
        if (sig.message != id || !committee.contains(sig.signer) || !verify(sig)) continue;
        usable.emplace(sig.signer, sig);
    }
    if (usable.size() < committee.quorum_size()) return std::nullopt;
    Certificate cert;
    cert.tx = tx;
    for (const auto& [validator, sig] : usable) {
        cert.endorsements.insert(sig);
        if (cert.endorsements.size() == committee.quorum_size()) break;
    }
    return cert;
}

} // namespace fastpath
