#include "fastpath/bc_validator.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace fastpath;
using namespace fptest;

namespace {

const Committee kCommittee(1); // n=4, quorum 3, eta 2/3

BcValidatorState make_state(const CounterGenesis& g, std::uint32_t self = 3) {
    return BcValidatorState(g, kCommittee, ValidatorId{self});
}

} // namespace

TEST_SUITE("bc_validator") {

TEST_CASE("init assigns eta times the balance") {
    auto g9 = counter_genesis("acct", 9);
    CHECK(make_state(g9).budget() == Quantity(6));
    CHECK(make_state(g9).version() == g9.v0());

    auto g0 = counter_genesis("zero", 0);
    CHECK(make_state(g0).budget() == Quantity(0));

    auto g1000 = counter_genesis("big", 1000);
    CHECK(make_state(g1000).budget() == Quantity(2000, 3));

    CounterGenesis negative{"bad", Quantity(-1), {alice()}};
    CHECK_THROWS_AS(BcValidatorState(negative, kCommittee, ValidatorId{0}), std::invalid_argument);
}

TEST_CASE("signing deducts budget for decrements only") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);

    for (std::uint64_t i = 0; i < 6; ++i) {
        auto res = state.process_tx(bc_tx(g, g.v0(), Quantity(-1), i));
        CHECK(res.ok());
    }
    CHECK(state.budget() == Quantity(0));
    CHECK(state.signed_txs().size() == 6);

    // Increments sign without touching the budget.
    auto credit = state.process_tx(bc_tx(g, g.v0(), Quantity(5), 100));
    CHECK(credit.ok());
    CHECK(state.budget() == Quantity(0));

    // Over-budget decrement is refused and changes nothing.
    auto fresh = make_state(g);
    auto res = fresh.process_tx(bc_tx(g, g.v0(), Quantity(-7), 0));
    CHECK(res.error == BcError::budget_exhausted);
    CHECK(fresh.budget() == Quantity(6));
    CHECK(fresh.signed_txs().empty());
}

TEST_CASE("resubmitted transaction returns the stored signature") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);
    auto tx = bc_tx(g, g.v0(), Quantity(-1), 0);
    auto first = state.process_tx(tx);
    auto second = state.process_tx(tx);
    CHECK(first.ok());
    CHECK(second.ok());
    CHECK(*first.value == *second.value);
    CHECK(state.budget() == Quantity(5)); // deducted once
}

TEST_CASE("signing rejections leave state untouched") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);

    auto wrong_version = bc_tx(g, sha256(std::string("elsewhere")), Quantity(-1), 0);
    CHECK(state.process_tx(wrong_version).error == BcError::wrong_version);

    auto unsigned_tx = bc_tx(g, g.v0(), Quantity(-1), 1);
    unsigned_tx.signatures.clear();
    CHECK(state.process_tx(unsigned_tx).error == BcError::invalid_auth);

    auto outsider = bc_tx(g, g.v0(), Quantity(-1), 2, carol());
    CHECK(state.process_tx(outsider).error == BcError::invalid_auth);

    CHECK(state.budget() == Quantity(6));
    CHECK(state.signed_txs().empty());
}

TEST_CASE("certificates at the root version execute immediately") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);
    auto tx = bc_tx(g, g.v0(), Quantity(-1), 0);
    auto outcome = state.process_cert(certify_quorum(tx, kCommittee));
    REQUIRE(outcome.error == BcError::none);
    CHECK(outcome.first_seen);
    REQUIRE(outcome.executed.size() == 1);
    CHECK(outcome.executed[0].tx == tx.id());
    CHECK(state.executed_txs().count(tx.id()) == 1);

    // A certificate below quorum is rejected.
    auto bad = certify(bc_tx(g, g.v0(), Quantity(-1), 1), {0, 1});
    CHECK(state.process_cert(bad).error == BcError::invalid_certificate);
}

TEST_CASE("duplicate certificate delivery executes once") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);
    auto tx = bc_tx(g, g.v0(), Quantity(-1), 0);
    auto cert = certify_quorum(tx, kCommittee);
    CHECK(state.process_cert(cert).executed.size() == 1);
    auto dup = state.process_cert(cert);
    CHECK(dup.duplicate);
    CHECK(dup.executed.empty());
    // Same transaction under a different quorum is also a duplicate.
    auto alt = certify(tx, {1, 2, 3});
    CHECK(state.process_cert(alt).duplicate);
    CHECK(state.executed_txs().size() == 1);
}

TEST_CASE("certificates park until their version history is executed") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);

    std::vector<Transaction> base;
    std::set<TxId> base_ids;
    for (std::uint64_t i = 0; i < 6; ++i) {
        base.push_back(bc_tx(g, g.v0(), Quantity(-1), i));
        base_ids.insert(base.back().id());
    }
    auto v1req = update_req(g, g.v0(), base_ids);
    auto tx7 = bc_tx(g, v1req.new_version(), Quantity(-1), 7);

    // Arrives before the version request is even known.
    auto early = state.process_cert(certify_quorum(tx7, kCommittee));
    CHECK(early.parked);
    CHECK(state.pending_cert_count() == 1);

    state.learn_request(v1req);
    for (std::size_t i = 0; i < base.size(); ++i) {
        auto outcome = state.process_cert(certify_quorum(base[i], kCommittee));
        REQUIRE(outcome.error == BcError::none);
        if (i + 1 < base.size()) {
            CHECK(outcome.executed.size() == 1);
        } else {
            // The last prerequisite unblocks the parked certificate too.
            CHECK(outcome.executed.size() == 2);
            CHECK(outcome.executed[1].tx == tx7.id());
        }
    }
    CHECK(state.pending_cert_count() == 0);
    CHECK(state.executed_txs().size() == 7);
}

TEST_CASE("version update recomputes the budget from the history") {
    auto g = counter_genesis("acct", 9);

    SUBCASE("validator that signed all six") {
        auto state = make_state(g);
        std::set<TxId> ids;
        for (std::uint64_t i = 0; i < 6; ++i) {
            auto tx = bc_tx(g, g.v0(), Quantity(-1), i);
            ids.insert(tx.id());
            REQUIRE(state.process_tx(tx).ok());
            REQUIRE(state.process_cert(certify_quorum(tx, kCommittee)).error == BcError::none);
        }
        CHECK(state.budget() == Quantity(0));
        auto req = update_req(g, g.v0(), ids);
        auto outcome = state.process_version_request(req);
        REQUIRE(outcome.adopted);
        CHECK(state.version() == req.new_version());
        CHECK(state.budget() == Quantity(2)); // 0 + 6*(-2/3) + 6*1
    }

    SUBCASE("validator that signed only three lands on the same budget") {
        auto state = make_state(g);
        std::set<TxId> ids;
        for (std::uint64_t i = 0; i < 6; ++i) {
            auto tx = bc_tx(g, g.v0(), Quantity(-1), i);
            ids.insert(tx.id());
            if (i < 3) REQUIRE(state.process_tx(tx).ok());
            REQUIRE(state.process_cert(certify_quorum(tx, kCommittee)).error == BcError::none);
        }
        CHECK(state.budget() == Quantity(3));
        auto outcome = state.process_version_request(update_req(g, g.v0(), ids));
        REQUIRE(outcome.adopted);
        CHECK(state.budget() == Quantity(2)); // 3 - 4 + 3: converges with full signers
        // Matches eta * (balance + value of history) exactly.
        CHECK(state.budget() == kCommittee.eta() * (Quantity(9) + Quantity(-6)));
    }

    SUBCASE("empty update advances the version and keeps the budget") {
        auto state = make_state(g);
        auto req = update_req(g, g.v0(), {});
        auto outcome = state.process_version_request(req);
        REQUIRE(outcome.adopted);
        CHECK(state.version() == req.new_version());
        CHECK(state.budget() == Quantity(6));
    }
}

TEST_CASE("version update rejections leave state untouched") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);

    // Wrong previous version.
    auto other = update_req(g, sha256(std::string("other")), {});
    CHECK(state.process_version_request(other).error == BcError::stale_version);

    // Uncertified transaction in the batch.
    auto tx = bc_tx(g, g.v0(), Quantity(-1), 0);
    REQUIRE(state.process_tx(tx).ok());
    auto uncertified = update_req(g, g.v0(), {tx.id()});
    CHECK(state.process_version_request(uncertified).error == BcError::uncertified_prev_tx);

    // Certified but carrying a different version than the request's parent.
    auto v1 = update_req(g, g.v0(), {});
    REQUIRE(state.process_version_request(v1).adopted);
    auto stale_tx_req = update_req(g, v1.new_version(), {tx.id()});
    REQUIRE(state.process_cert(certify_quorum(tx, kCommittee)).error == BcError::none);
    CHECK(state.process_version_request(stale_tx_req).error ==
          BcError::version_mismatch_in_prev_txs);

    // Requester outside the owner set.
    auto foreign = update_req(g, v1.new_version(), {}, carol());
    CHECK(state.process_version_request(foreign).error == BcError::invalid_auth);

    CHECK(state.version() == v1.new_version());
    CHECK(state.budget() == Quantity(5)); // only the signing deduction for tx

}

TEST_CASE("version requests are idempotent") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);
    auto req = update_req(g, g.v0(), {});
    REQUIRE(state.process_version_request(req).adopted);
    auto again = state.process_version_request(req);
    CHECK(again.duplicate);
    CHECK_FALSE(again.adopted);
}

TEST_CASE("merge adoption counts both branches once") {
    // Conflicting updates over six root transactions: one branch carries four
    // of them, the other carries the remaining two. After the merge every
    // validator lands on eta * (9 - 6) = 2 regardless of which branch it took.
    auto g = counter_genesis("acct", 9, {alice(), bob()});
    std::vector<Transaction> txs;
    std::set<TxId> all_ids, four, two;
    for (std::uint64_t i = 0; i < 6; ++i) {
        txs.push_back(bc_tx(g, g.v0(), Quantity(-1), i));
        all_ids.insert(txs.back().id());
        (i < 4 ? four : two).insert(txs.back().id());
    }
    auto left = update_req(g, g.v0(), four, alice());
    auto right = update_req(g, g.v0(), two, bob());
    auto merged = merge_req(g, {left.new_version(), right.new_version()}, alice());

    auto run_branch = [&](const VersionRequest& adopt_first) {
        auto state = make_state(g);
        for (const auto& tx : txs) {
            REQUIRE(state.process_tx(tx).ok());
            REQUIRE(state.process_cert(certify_quorum(tx, kCommittee)).error == BcError::none);
        }
        CHECK(state.budget() == Quantity(0));
        REQUIRE(state.process_version_request(adopt_first).adopted);
        state.learn_request(left);
        state.learn_request(right);
        auto outcome = state.process_version_request(merged);
        REQUIRE(outcome.adopted);
        CHECK(state.version() == merged.new_version());
        CHECK(state.budget() == Quantity(2));
        return state;
    };

    auto on_left = run_branch(left);   // had budget 4/3 after the branch
    auto on_right = run_branch(right); // had budget 2/3 after the branch
    CHECK(on_left.budget() == on_right.budget());
}

TEST_CASE("merge requires membership of the current version") {
    auto g = counter_genesis("acct", 9, {alice(), bob()});
    auto left = update_req(g, g.v0(), {}, alice());
    auto right = update_req(g, g.v0(), {}, bob());
    auto merged = merge_req(g, {left.new_version(), right.new_version()}, alice());

    auto state = make_state(g); // still on v0
    state.learn_request(left);
    state.learn_request(right);
    CHECK(state.process_version_request(merged).error == BcError::current_version_not_merged);
    CHECK(state.version() == g.v0());

    REQUIRE(state.process_version_request(right).adopted);
    CHECK(state.process_version_request(merged).adopted);
}

TEST_CASE("single parent merge advances the version and keeps the budget") {
    auto g = counter_genesis("acct", 9, {alice(), bob()});
    auto state = make_state(g);
    // Burn some budget on transactions that never get certified.
    for (std::uint64_t i = 0; i < 2; ++i)
        REQUIRE(state.process_tx(bc_tx(g, g.v0(), Quantity(-1), i)).ok());
    CHECK(state.budget() == Quantity(4));
    auto recovery = merge_req(g, {g.v0()}, bob());
    REQUIRE(state.process_version_request(recovery).adopted);
    CHECK(state.version() == recovery.new_version());
    CHECK(state.budget() == Quantity(4));
}

TEST_CASE("conversion executes against the exact remaining balance") {
    auto g = counter_genesis("acct", 9);
    auto state = make_state(g);

    std::set<TxId> root_ids;
    for (std::uint64_t i = 0; i < 6; ++i) {
        auto tx = bc_tx(g, g.v0(), Quantity(-1), i);
        root_ids.insert(tx.id());
        REQUIRE(state.process_tx(tx).ok());
        REQUIRE(state.process_cert(certify_quorum(tx, kCommittee)).error == BcError::none);
    }
    auto v1 = update_req(g, g.v0(), root_ids);
    REQUIRE(state.process_version_request(v1).adopted);

    std::set<TxId> v1_ids;
    Transaction t7 = bc_tx(g, v1.new_version(), Quantity(-1), 7);
    Transaction t8 = bc_tx(g, v1.new_version(), Quantity(-1), 8);
    for (const auto& tx : {t7, t8}) {
        v1_ids.insert(tx.id());
        REQUIRE(state.process_tx(tx).ok());
    }
    REQUIRE(state.process_cert(certify_quorum(t7, kCommittee)).error == BcError::none);

    Transaction convert;
    convert.command = ConvertToOwned{g.id(), v1.new_version(), v1_ids};
    convert.signers = {alice()};
    convert.sign_by(alice());
    REQUIRE(state.process_tx(convert).ok());

    // Parked: t8 is not executed yet.
    auto parked = state.process_cert(certify_quorum(convert, kCommittee));
    CHECK(parked.parked);

    auto unblock = state.process_cert(certify_quorum(t8, kCommittee));
    REQUIRE(unblock.error == BcError::none);
    REQUIRE(unblock.executed.size() == 2);
    const auto& conv_exec = unblock.executed[1];
    REQUIRE(conv_exec.conversion_output.has_value());
    CHECK(conv_exec.conversion_output->balance == Quantity(1)); // 9 - 6 - 2
    CHECK(conv_exec.conversion_output->owners == std::set<OwnerId>{alice()});
    CHECK(state.frozen());

    // Frozen counter refuses further signing.
    CHECK(state.process_tx(bc_tx(g, v1.new_version(), Quantity(-1), 9)).error == BcError::frozen);
}

TEST_CASE("conversion of an untouched counter carries the full balance") {
    auto g = counter_genesis("acct", 0);
    auto state = make_state(g);
    Transaction convert;
    convert.command = ConvertToOwned{g.id(), g.v0(), {}};
    convert.signers = {alice()};
    convert.sign_by(alice());
    auto outcome = state.process_cert(certify_quorum(convert, kCommittee));
    REQUIRE(outcome.executed.size() == 1);
    CHECK(outcome.executed[0].conversion_output->balance == Quantity(0));
}

TEST_CASE("budget never goes negative under random traffic") {
    auto g = counter_genesis("acct", 30, {alice(), bob()});
    Rand rng(1234);
    for (int round = 0; round < 20; ++round) {
        auto state = make_state(g);
        std::vector<VersionId> versions{g.v0()};
        std::map<VersionId, std::vector<Transaction>> certified_at;
        std::uint64_t nonce = 0;
        for (int step = 0; step < 120; ++step) {
            CHECK_FALSE(state.budget().is_negative());
            auto choice = rng.below(10);
            VersionId v = versions[rng.below(versions.size())];
            if (choice < 6) {
                auto tx = bc_tx(g, v, Quantity(rng.in_range(-4, 3)), nonce++,
                                rng.below(2) ? alice() : bob());
                state.process_tx(tx);
                if (rng.below(2) == 0) {
                    state.process_cert(certify_quorum(tx, kCommittee));
                    certified_at[v].push_back(tx);
                }
            } else if (choice < 8) {
                std::set<TxId> ids;
                for (const auto& tx : certified_at[state.version()])
                    if (rng.below(2) == 0) ids.insert(tx.id());
                auto req = update_req(g, state.version(), ids, alice());
                if (state.process_version_request(req).adopted) versions.push_back(req.new_version());
            } else {
                std::set<VersionId> prevs{state.version()};
                if (rng.below(2) == 0) prevs.insert(versions[rng.below(versions.size())]);
                auto req = merge_req(g, prevs, bob());
                if (state.process_version_request(req).adopted) versions.push_back(req.new_version());
            }
        }
        CHECK_FALSE(state.budget().is_negative());
    }
}

} // TEST_SUITE
