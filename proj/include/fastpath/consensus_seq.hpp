#pragma once

#include "fastpath/owned.hpp"
#include "fastpath/types.hpp"

#include <cstdint>
#include <map>
#include <variant>
#include <vector>

namespace fastpath {

// An item accepted for total-order sequencing: a transaction certificate
// (checkpoint path) or an unlock certificate.
struct SeqItem {
    std::variant<Certificate, UnlockCert> payload;

    bool is_cert() const { return payload.index() == 0; }
    const Certificate& cert() const { return std::get<Certificate>(payload); }
    const UnlockCert& unlock() const { return std::get<UnlockCert>(payload); }

    // Identity for dedup: semantic, so re-submitted equivalents share a slot.
    Digest identity() const;
};

// Trusted total-order log: same items, same order, at every honest validator.
//
// Submissions stage under (arrival time, digest) and seal once simulated time
// moves past them, which makes the global order a pure function of the run.
// Each validator consumes sealed slots through its own cursor.
class SequencerLog {
public:
    // Returns true if the item occupies a new slot (first submission).
    bool submit(const SeqItem& item, std::uint64_t arrival_time);

    // Seals every staged item with arrival time strictly below `time`.
    void seal_up_to(std::uint64_t time);
    void seal_all();

    std::size_t size() const { return order_.size(); }
    const SeqItem& at(std::size_t slot) const { return items_.at(order_.at(slot)); }
    const std::vector<Digest>& order() const { return order_; }
    std::size_t staged_count() const { return staged_.size(); }

    std::size_t cursor(ValidatorId v) const;
    const SeqItem* next_for(ValidatorId v) const;
    void advance(ValidatorId v);

    void encode(Encoder& enc) const;

private:
    struct StageKey {
        std::uint64_t time;
        Digest id;
        bool operator<(const StageKey& o) const {
            return time != o.time ? time < o.time : id < o.id;
        }
    };

    std::map<Digest, SeqItem> items_;
    std::map<StageKey, Digest> staged_;
    std::vector<Digest> order_;
    std::map<std::uint32_t, std::size_t> cursors_;
};

} // namespace fastpath
