#pragma once

#include "fastpath/bc_validator.hpp"
#include "fastpath/consensus_seq.hpp"
#include "fastpath/messages.hpp"
#include "fastpath/owned.hpp"
#include "fastpath/trace.hpp"

#include <map>
#include <vector>

namespace fastpath {

enum class ByzStrategy : std::uint8_t { honest, abstain, sign_anything };

struct SimFlags {
    bool rebroadcast = true;
    bool submit_certs_to_consensus = false; // users also push certificates into the sequencer
    bool disable_unlock_refusal = false;    // oracle sensitivity control
    bool spend_remainder = false;           // spend the converted balance via the owned path
    std::uint32_t max_resend = 64;
};

// One simulated validator: counter state machines plus the owned-object
// validator, with message routing, rebroadcast and the Byzantine strategies
// the adversary can drive. Value type so whole simulations can be copied
// during interleaving enumeration.
class ValidatorNode {
public:
    ValidatorNode() = default;
    ValidatorNode(Committee committee, ValidatorId self, SimFlags flags);

    void add_counter(const CounterGenesis& genesis, std::optional<Quantity> eta_override);
    void add_object(const ObjectGenesis& genesis);

    std::vector<Outbound> handle(const Envelope& env, std::uint64_t now, Trace& trace);
    std::vector<Outbound> handle_seq_item(const SeqItem& item, std::size_t slot, std::uint64_t now,
                                          Trace& trace);
    // Checkpoint flush at epoch end: make sure a finalized certificate is
    // executed here, then the caller drops locks.
    std::vector<Outbound> force_execute(const Certificate& cert, std::uint64_t now, Trace& trace);
    void epoch_end(std::uint64_t now, Trace& trace);

    ValidatorId id() const { return self_; }
    bool crashed() const { return crashed_; }
    void crash() { crashed_ = true; }
    bool corrupt() const { return strategy_ != ByzStrategy::honest; }
    ByzStrategy strategy() const { return strategy_; }
    void corrupt_as(ByzStrategy strategy) { strategy_ = strategy; }

    const std::map<CounterId, BcValidatorState>& counters() const { return counters_; }
    const ObjectValidator& owned() const { return owned_; }
    ObjectValidator& owned_mutable() { return owned_; }

    ValidatorSnapshot snapshot() const;
    void encode(Encoder& enc) const;

private:
    std::vector<Outbound> handle_honest(const Envelope& env, std::uint64_t now, Trace& trace);
    std::vector<Outbound> handle_byzantine(const Envelope& env);
    void note_bc_executions(const std::vector<BcExecution>& execs, const BcValidatorState& state,
                            std::uint64_t now, Trace& trace, std::vector<Outbound>& out);
    void emit_effect(const EffectSign& effect, const std::set<OwnerId>& recipients,
                     std::uint64_t now, Trace& trace, std::vector<Outbound>& out);
    // Version requests on the path from the counter root to `version`, in
    // topological order, for message attachments.
    std::vector<VersionRequest> chain_for(const BcValidatorState& state,
                                          const VersionId& version) const;
    BcValidatorState* counter_for_tx(const Transaction& tx);

    Committee committee_;
    ValidatorId self_;
    SimFlags flags_;
    bool crashed_ = false;
    ByzStrategy strategy_ = ByzStrategy::honest;

    std::map<CounterId, BcValidatorState> counters_;
    ObjectValidator owned_;
};

} // namespace fastpath
