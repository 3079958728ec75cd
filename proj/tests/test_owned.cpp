#include "fastpath/owned.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace fastpath;
using namespace fptest;

namespace {

const Committee kCommittee(1);

ObjectValidator make_validator(const std::vector<ObjectGenesis>& objects, std::uint32_t self = 0) {
    ObjectValidator v(kCommittee, ValidatorId{self});
    for (const auto& g : objects) v.install_genesis(g);
    return v;
}

} // namespace

TEST_SUITE("owned") {

TEST_CASE("multi-owner swap signs when both owners signed") {
    auto a = object_genesis("A", {alice()});
    auto b = object_genesis("B", {bob()});
    auto validator = make_validator({a, b});

    auto swap = swap_tx(a, b);
    auto res = validator.process_tx(swap);
    CHECK(res.ok());
    CHECK(validator.sign_locks().at(key_of(a)) == swap.id());
    CHECK(validator.sign_locks().at(key_of(b)) == swap.id());

    // Same transaction again: stored signature, no state change.
    auto again = validator.process_tx(swap);
    CHECK(again.ok());
    CHECK(*again.value == *res.value);
}

TEST_CASE("swap without one owner signature is rejected") {
    auto a = object_genesis("A", {alice()});
    auto b = object_genesis("B", {bob()});
    auto validator = make_validator({a, b});

    auto half_signed = owned_tx({key_of(a), key_of(b)},
                                {OwnedOutput{a.id(), {bob()}, Quantity(0)},
                                 OwnedOutput{b.id(), {alice()}, Quantity(0)}},
                                {alice()});
    CHECK(validator.process_tx(half_signed).error == OwnedError::bad_auth);
    CHECK(validator.sign_locks().empty());
}

TEST_CASE("conflicting transaction on a locked key is equivocation") {
    auto a = object_genesis("A", {alice()});
    auto validator = make_validator({a});

    auto t1 = owned_tx({key_of(a)}, {OwnedOutput{a.id(), {alice()}, Quantity(0)}}, {alice()}, 1);
    auto t2 = owned_tx({key_of(a)}, {OwnedOutput{a.id(), {bob()}, Quantity(0)}}, {alice()}, 2);
    CHECK(validator.process_tx(t1).ok());
    CHECK(validator.process_tx(t2).error == OwnedError::equivocation_detected);
}

TEST_CASE("unknown object or version is rejected") {
    auto a = object_genesis("A", {alice()});
    auto validator = make_validator({a});

    auto ghost = object_genesis("ghost", {alice()});
    auto t1 = owned_tx({key_of(ghost)}, {}, {alice()});
    CHECK(validator.process_tx(t1).error == OwnedError::unknown_object);

    auto stale = owned_tx({ObjectKey{a.id(), sha256(std::string("old"))}}, {}, {alice()});
    CHECK(validator.process_tx(stale).error == OwnedError::unknown_object);
}

TEST_CASE("certificate execution consumes inputs and creates outputs") {
    auto a = object_genesis("A", {alice()}, 5);
    auto b = object_genesis("B", {bob()}, 7);
    auto validator = make_validator({a, b});

    auto swap = swap_tx(a, b);
    auto outcome = validator.process_cert(certify_quorum(swap, kCommittee));
    REQUIRE(outcome.error == OwnedError::none);
    REQUIRE(outcome.effect.has_value());
    CHECK(validator.executed_txs().count(swap.id()) == 1);

    const auto* a_now = validator.find_object(a.id());
    REQUIRE(a_now != nullptr);
    CHECK(a_now->owners == std::set<OwnerId>{bob()});
    CHECK(a_now->version == swap.output_version_for(a.id()));
    CHECK(a_now->balance == Quantity(5));
    CHECK(validator.lock_db().at(key_of(a)).tx.id() == swap.id());

    // Replay: single execution, flagged as duplicate.
    auto replay = validator.process_cert(certify_quorum(swap, kCommittee));
    CHECK(replay.duplicate);

    // Below-quorum certificate never executes.
    auto t2 = owned_tx({ObjectKey{a.id(), a_now->version}}, {}, {bob()}, 9);
    CHECK(validator.process_cert(certify(t2, {0, 1})).error == OwnedError::invalid_cert);
}

TEST_CASE("fast path refuses certificates on unlocked keys") {
    auto a = object_genesis("A", {alice()});
    auto gas = object_genesis("gasA", {alice()});
    auto validator = make_validator({a, gas});

    auto t1 = owned_tx({key_of(a)}, {OwnedOutput{a.id(), {alice()}, Quantity(0)}}, {alice()}, 1);
    auto rqt = unlock_rqt({key_of(a)}, t1, key_of(gas), alice());
    auto vote = validator.process_unlock_rqt(rqt);
    REQUIRE(vote.vote.has_value());
    CHECK(validator.unlock_state(key_of(a)) == UnlockState::unlocked);

    auto outcome = validator.process_cert(certify_quorum(t1, kCommittee));
    CHECK(outcome.refused);
    CHECK(outcome.error == OwnedError::unlocked_key_refusal);
    CHECK(validator.executed_txs().empty());

    // With the refusal disabled (oracle sensitivity control) it executes.
    validator.set_unlocked_refusal(false);
    CHECK(validator.process_cert(certify_quorum(t1, kCommittee)).error == OwnedError::none);
}

TEST_CASE("epoch end drops signing locks but keeps executions") {
    auto a = object_genesis("A", {alice()});
    auto b = object_genesis("B", {bob()});
    auto gas = object_genesis("gasA", {alice()});
    auto validator = make_validator({a, b, gas});

    // An aborted swap leaves both keys locked.
    auto swap = swap_tx(a, b);
    REQUIRE(validator.process_tx(swap).ok());
    CHECK(validator.sign_locks().size() == 2);

    validator.epoch_end();
    CHECK(validator.sign_locks().empty());

    // Both keys accept fresh transactions next epoch.
    auto t1 = owned_tx({key_of(a)}, {OwnedOutput{a.id(), {alice()}, Quantity(0)}}, {alice()}, 5);
    CHECK(validator.process_tx(t1).ok());
}

TEST_CASE("epoch end with no locks is a no-op") {
    auto a = object_genesis("A", {alice()});
    auto validator = make_validator({a});
    Encoder before;
    validator.encode(before);
    validator.epoch_end();
    Encoder after;
    validator.encode(after);
    CHECK(before.digest_of() == after.digest_of());
}

} // TEST_SUITE
