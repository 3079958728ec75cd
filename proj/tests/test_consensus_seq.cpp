#include "fastpath/consensus_seq.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace fastpath;
using namespace fptest;

namespace {

const Committee kCommittee(1);

SeqItem cert_item(const Transaction& tx) {
    return SeqItem{certify_quorum(tx, kCommittee)};
}

} // namespace

TEST_SUITE("consensus_seq") {

TEST_CASE("duplicate submissions share one slot") {
    SequencerLog log;
    auto g = counter_genesis("acct", 9);
    auto item = cert_item(bc_tx(g, g.v0(), Quantity(-1), 0));
    CHECK(log.submit(item, 1));
    CHECK_FALSE(log.submit(item, 2));
    // The same transaction under a different quorum is the same slot.
    auto alt = SeqItem{certify(bc_tx(g, g.v0(), Quantity(-1), 0), {1, 2, 3})};
    CHECK_FALSE(log.submit(alt, 3));
    log.seal_all();
    CHECK(log.size() == 1);
}

TEST_CASE("ordering is by arrival time with digest tie break") {
    auto g = counter_genesis("acct", 9);
    auto t1 = cert_item(bc_tx(g, g.v0(), Quantity(-1), 1));
    auto t2 = cert_item(bc_tx(g, g.v0(), Quantity(-1), 2));
    auto t3 = cert_item(bc_tx(g, g.v0(), Quantity(-1), 3));

    SequencerLog log;
    log.submit(t2, 5);
    log.submit(t3, 5); // same tick: digest decides
    log.submit(t1, 3);
    log.seal_all();
    REQUIRE(log.size() == 3);
    CHECK(log.order()[0] == t1.identity());
    Digest lo = std::min(t2.identity(), t3.identity());
    Digest hi = std::max(t2.identity(), t3.identity());
    CHECK(log.order()[1] == lo);
    CHECK(log.order()[2] == hi);

    // Submission order within the tick is irrelevant.
    SequencerLog other;
    other.submit(t1, 3);
    other.submit(t3, 5);
    other.submit(t2, 5);
    other.seal_all();
    CHECK(other.order() == log.order());
}

TEST_CASE("sealing only exposes items whose time has passed") {
    auto g = counter_genesis("acct", 9);
    SequencerLog log;
    log.submit(cert_item(bc_tx(g, g.v0(), Quantity(-1), 1)), 4);
    log.seal_up_to(4);
    CHECK(log.size() == 0);
    CHECK(log.staged_count() == 1);
    log.seal_up_to(5);
    CHECK(log.size() == 1);
}

TEST_CASE("per validator delivery is prefix consistent") {
    auto g = counter_genesis("acct", 9);
    SequencerLog log;
    for (std::uint64_t i = 0; i < 5; ++i)
        log.submit(cert_item(bc_tx(g, g.v0(), Quantity(-1), i)), i);
    log.seal_all();

    ValidatorId v0{0}, v1{1};
    std::vector<Digest> seen0, seen1;
    for (int i = 0; i < 5; ++i) {
        seen0.push_back(log.next_for(v0)->identity());
        log.advance(v0);
        if (i < 2) {
            seen1.push_back(log.next_for(v1)->identity());
            log.advance(v1);
        }
    }
    CHECK(log.next_for(v0) == nullptr);
    CHECK(std::equal(seen1.begin(), seen1.end(), seen0.begin())); // prefix
    CHECK(log.cursor(v0) == 5);
    CHECK(log.cursor(v1) == 2);

    // Integrity: everything delivered was submitted, no duplicates.
    std::set<Digest> unique(seen0.begin(), seen0.end());
    CHECK(unique.size() == seen0.size());
}

} // TEST_SUITE
