#pragma once

#include "fastpath/types.hpp"

#include <optional>
#include <vector>

namespace fastpath {

// A message the user hands to the network layer: either a transaction
// (counter update or conversion) or a version request.
struct UserEmission {
    std::optional<Transaction> tx;
    std::optional<VersionRequest> request;
};

struct UserUpdateOutcome {
    std::vector<UserEmission> emitted;
    bool rejected = false; // still over budget after one version update
};

// Owner-side bookkeeping for one bounded counter: mirrors the validators'
// budget without any communication, decides when to issue version updates,
// and converts the counter once the budget dips below min_budget.
class BcUserState {
public:
    BcUserState() = default;
    BcUserState(const CounterGenesis& genesis, const Committee& committee, OwnerId self,
                Quantity min_budget = Quantity(1));

    // Requests one counter update of the given delta. May emit a version
    // update (or conversion) first when the budget does not cover it.
    UserUpdateOutcome user_update(const Quantity& delta);

    // Forces a version transition now: emits a version update request when
    // the recomputed budget stays above min_budget, otherwise a conversion.
    UserEmission user_version_update();

    const Quantity& budget() const { return budget_; }
    const VersionId& version() const { return version_; }
    const std::vector<Transaction>& sent_txs() const { return sent_txs_; }
    bool converted() const { return converted_; }
    std::uint64_t version_updates_sent() const { return version_updates_sent_; }

private:
    Transaction build_tx(const Quantity& delta);

    CounterGenesis genesis_;
    Quantity eta_;
    OwnerId self_;
    Quantity min_budget_;

    VersionId version_;
    Quantity budget_;
    std::vector<Transaction> sent_txs_; // all at the current version
    bool converted_ = false;
    std::uint64_t nonce_ = 0;
    std::uint64_t version_updates_sent_ = 0;
};

// Assembles a certificate from collected signatures over tx. Signatures with
// the wrong payload or from outside the committee are dropped; if more than a
// quorum remain, the lowest validator ids win so the certificate is canonical.
std::optional<Certificate> collect_certificate(const Transaction& tx,
                                               const std::vector<ValidatorSig>& sigs,
                                               const Committee& committee);

} // namespace fastpath
