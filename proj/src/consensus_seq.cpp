#include "fastpath/consensus_seq.hpp"

namespace fastpath {

Digest SeqItem::identity() const {
    if (is_cert())
        return tagged_digest("seq/cert", [&](Encoder& enc) { enc.digest(cert().tx.id()); });
    return tagged_digest("seq/unlock", [&](Encoder& enc) { enc.digest(unlock().digest()); });
}

bool SequencerLog::submit(const SeqItem& item, std::uint64_t arrival_time) {
    const Digest id = item.identity();
    if (items_.count(id) > 0) return false; // duplicates share the first slot
    items_.emplace(id, item);
    staged_.emplace(StageKey{arrival_time, id}, id);
    return true;
}

void SequencerLog::seal_up_to(std::uint64_t time) {
    while (!staged_.empty() && staged_.begin()->first.time < time) {
        order_.push_back(staged_.begin()->second);
        staged_.erase(staged_.begin());
    }
}

void SequencerLog::seal_all() {
    for (const auto& [key, id] : staged_) order_.push_back(id);
    staged_.clear();
}

std::size_t SequencerLog::cursor(ValidatorId v) const {
    auto it = cursors_.find(v.index);
    return it == cursors_.end() ? 0 : it->second;
}

const SeqItem* SequencerLog::next_for(ValidatorId v) const {
    std::size_t cur = cursor(v);
    if (cur >= order_.size()) return nullptr;
    return &items_.at(order_[cur]);
}

void SequencerLog::advance(ValidatorId v) {
    ++cursors_[v.index];
}

void SequencerLog::encode(Encoder& enc) const {
    enc.u64(order_.size());
    for (const auto& id : order_) enc.digest(id);
    enc.u64(staged_.size());
    for (const auto& [key, id] : staged_) {
        enc.u64(key.time);
        enc.digest(id);
    }
    enc.u64(cursors_.size());
    for (const auto& [v, c] : cursors_) {
        enc.u32(v);
        enc.u64(c);
    }
}

} // namespace fastpath
