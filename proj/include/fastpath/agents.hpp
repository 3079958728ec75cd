#pragma once

#include "fastpath/bc_user.hpp"
#include "fastpath/messages.hpp"
#include "fastpath/node.hpp"
#include "fastpath/trace.hpp"

#include <deque>
#include <map>
#include <set>
#include <vector>

namespace fastpath {

enum class UserKind : std::uint8_t {
    honest_bc,    // follows the counter owner protocol, demand driven
    owned_script, // submits pre-built owned transactions, optionally gated on finality
    collector,    // pushes scripted items and assembles certificates mechanically
    bc_adversary, // seeded equivocation and overspend against a counter
};

struct WorkItem {
    enum class Op : std::uint8_t {
        bc_spend,          // counter + delta through the honest user state
        bc_version_update, // force a version transition now
        send_tx,           // scripted transaction by index
        send_unlock,       // scripted unlock request by index
        adv_spam,          // adversary: counter update at its current base version
        adv_update,        // adversary: version update branch `index` at the base
        adv_merge,         // adversary: merge its branches (and maybe the base)
    };

    std::uint64_t time = 0;
    OwnerId user;
    Op op = Op::bc_spend;
    CounterId counter;
    Quantity delta;
    std::size_t index = 0;
    std::vector<std::uint32_t> targets; // validator indexes; empty = everyone
    std::vector<std::size_t> branches;  // adv_merge arguments
    bool include_base = false;          // adv_merge: single-parent style merge
};

// A deterministic user-side actor. All state lives in the object, so whole
// simulations stay copyable for interleaving enumeration.
class UserAgent {
public:
    UserAgent() = default;
    UserAgent(OwnerId id, UserKind kind, Committee committee, SimFlags flags, std::uint64_t seed);

    void add_counter(const CounterGenesis& genesis, Quantity min_budget = Quantity(1));
    void register_tx(const Transaction& tx);
    void register_rqt(const UnlockRqt& rqt);
    void set_sequential(bool on) { sequential_ = on; }
    void set_prefer_no_commit(bool on) { prefer_no_commit_ = on; }

    std::vector<Outbound> on_work(const WorkItem& work, std::uint64_t now, Trace& trace);
    std::vector<Outbound> on_message(const Envelope& env, std::uint64_t now, Trace& trace);

    OwnerId id() const { return id_; }
    UserKind kind() const { return kind_; }
    const BcUserState* bc_state(const CounterId& counter) const;
    bool effect_certified(const Digest& subject) const { return effect_done_.count(subject) > 0; }
    std::uint64_t effect_cert_time(const Digest& subject) const;
    const std::map<TxId, Transaction>& tx_registry() const { return tx_registry_; }
    std::size_t unlock_certs_formed() const { return ucert_done_.size(); }

    void encode(Encoder& enc) const;

private:
    struct BcRuntime {
        std::deque<Quantity> demands;
        bool waiting_acks = false;
        Digest pending_request;
        std::set<std::uint32_t> acks;
        std::vector<VersionRequest> my_requests; // adopted chain, oldest first
        std::map<TxId, Certificate> my_certs;
        TxId conversion_tx;
        bool conversion_sent = false;
    };

    struct AdversaryRuntime {
        VersionId base;
        std::set<TxId> certified_at_base;
        std::map<std::size_t, VersionRequest> branches;
        std::uint64_t nonce = 0;
    };

    std::vector<Outbound> broadcast(const Message& msg) const;
    std::vector<Outbound> to_targets(const Message& msg, const std::vector<std::uint32_t>& targets) const;
    void submit_cert(const Certificate& cert, std::uint64_t now, Trace& trace,
                     std::vector<Outbound>& out);
    void pump_bc(const CounterId& counter, std::uint64_t now, Trace& trace,
                 std::vector<Outbound>& out);
    void handle_signature(const TxId& txid, const ValidatorSig& sig, std::uint64_t now,
                          Trace& trace, std::vector<Outbound>& out);
    void try_assemble_unlock(const Digest& rqtd, std::uint64_t now, Trace& trace,
                             std::vector<Outbound>& out);

    OwnerId id_;
    UserKind kind_ = UserKind::honest_bc;
    Committee committee_;
    SimFlags flags_;
    std::uint64_t rng_state_ = 0;

    std::map<CounterId, CounterGenesis> counter_genesis_;
    std::map<CounterId, BcUserState> bc_;
    std::map<CounterId, BcRuntime> bc_runtime_;
    std::map<CounterId, AdversaryRuntime> adversary_;

    std::map<TxId, Transaction> tx_registry_;
    std::map<Digest, UnlockRqt> rqt_registry_;
    std::map<TxId, std::map<std::uint32_t, ValidatorSig>> sigs_;
    std::set<TxId> cert_done_;
    std::map<Digest, std::map<std::uint32_t, UnlockVote>> votes_;
    std::set<Digest> ucert_done_;
    std::map<Digest, std::map<std::uint32_t, EffectSign>> effect_counts_; // by (subject,result)
    std::set<Digest> effect_done_;                                        // by subject
    std::map<Digest, std::uint64_t> effect_done_time_;
    std::map<Digest, std::uint32_t> resends_;

    bool sequential_ = false;
    bool prefer_no_commit_ = false;
    std::deque<std::size_t> script_queue_;
    std::optional<TxId> inflight_;
};

} // namespace fastpath
