#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sdnsim/packet.hpp"
#include "sdnsim/sim_time.hpp"
#include "sdnsim/topology.hpp"

namespace sdnsim {

enum class AttackKind { IcmpFlood, SynFlood };

std::string attack_kind_name(AttackKind k);  // "icmp_flood" / "syn_flood"

// Parameterized flood. rate_pps is per zombie; the emission rate ramps
// linearly from 0 to rate_pps over ramp_s seconds after order receipt and
// then holds.
struct AttackSpec {
    AttackKind kind = AttackKind::IcmpFlood;
    IpAddr target_ip;
    double rate_pps = 0;
    std::uint32_t payload_len = 0;
    std::optional<std::uint16_t> tcp_window;  // SynFlood only
    std::optional<std::uint16_t> dport;       // SynFlood only
    SimTime start;                            // command issue time
    double duration_s = 0;
    double ramp_s = 0;
};

// Empty means the spec satisfies its own invariants (rate > 0, duration > 0,
// ramp >= 0, TCP fields present iff SynFlood).
std::vector<Violation> validate_attack_spec(const AttackSpec& spec);

struct ZombieState {
    NodeId host;
    IpAddr ip;
    SimTime infected_at;
    std::optional<SimTime> order_received_at;
    std::uint64_t emitted_count = 0;
};

struct C2Delivery {
    NodeId zombie;
    SimTime at;
};

// Botmaster lifecycle: infect -> issue_attack -> (zombies emit) -> cleanup.
// C2 is control-plane only; orders reach every zombie one dissemination delay
// after issue.
class Botmaster {
  public:
    Botmaster(const TopologyGraph& topo, Duration c2_delay);

    // Registers the host as a zombie. Idempotent. Infecting the victim or a
    // non-host raises ValidationError.
    void infect(const NodeId& host, SimTime now);

    // Schedules one C2 delivery per zombie at now + c2_delay and records the
    // command. Raises ValidationError when no host is infected.
    std::vector<C2Delivery> issue_attack(const AttackSpec& spec, SimTime now);

    // Marks the order received (engine calls this when a C2 delivery fires).
    void deliver_order(const NodeId& zombie, SimTime now);

    // Removes every zombie record and the command history. Anything already
    // observed victim-side (alerts, report data) is untouched.
    void cleanup(SimTime now);

    std::map<NodeId, ZombieState>& zombies() { return zombies_; }
    const std::map<NodeId, ZombieState>& zombies() const { return zombies_; }
    const std::vector<AttackSpec>& history() const { return history_; }
    Duration c2_delay() const { return c2_delay_; }

  private:
    const TopologyGraph* topo_;
    Duration c2_delay_;
    std::map<NodeId, ZombieState> zombies_;
    std::vector<AttackSpec> history_;
};

struct Emission {
    Packet pkt;
    SimTime at;
};

// Next packet this zombie will emit, or nullopt when the order has not been
// received or the attack window is over. The n-th packet goes out when the
// integral of the ramped rate reaches n, so the emitted count over a full run
// tracks rate_pps * (duration - ramp/2) within one packet. SYN floods rotate
// the ephemeral source port starting at 40000.
std::optional<Emission> zombie_next_emission(ZombieState& z, const AttackSpec& spec, SeqSource& seqs);

}  // namespace sdnsim
