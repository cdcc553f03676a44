#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "sdnsim/packet.hpp"
#include "sdnsim/sim_time.hpp"
#include "sdnsim/topology.hpp"

namespace sdnsim {

// Match fields; an absent field is a wildcard. All-wildcard entries are
// rejected at install time.
struct FlowMatch {
    std::optional<IpAddr> dst_ip;
    std::optional<IpAddr> src_ip;
    std::optional<Protocol> protocol;
    std::optional<int> in_port;

    bool has_any_field() const { return dst_ip || src_ip || protocol || in_port; }
    bool matches(const Packet& pkt, int port) const;
    bool operator==(const FlowMatch&) const = default;
};

struct FlowAction {
    enum class Kind { Forward, Drop, ToController };

    Kind kind = Kind::Drop;
    int port = 0;  // meaningful for Forward only

    static FlowAction forward(int port) { return FlowAction{Kind::Forward, port}; }
    static FlowAction drop() { return FlowAction{Kind::Drop, 0}; }
    static FlowAction to_controller() { return FlowAction{Kind::ToController, 0}; }

    bool operator==(const FlowAction&) const = default;
};

struct FlowEntry {
    FlowMatch match;
    int priority = 0;  // 0..65535
    FlowAction action;
    Duration idle_timeout = Duration::from_seconds(60);
    SimTime installed_at;
    SimTime last_used;
    std::uint64_t packet_count = 0;
    std::uint64_t byte_count = 0;
};

struct SwitchCounters {
    std::uint64_t packets_matched = 0;
    std::uint64_t packets_punted = 0;
    std::uint64_t flows_installed = 0;
    std::uint64_t flows_expired = 0;
};

struct SwitchState {
    NodeId id;
    std::set<int> ports;
    std::vector<FlowEntry> table;  // insertion order; replacement keeps position
    SwitchCounters counters;
};

// Highest-priority matching entry, ties broken by earliest installation
// (table position). Pure: does not touch counters. Unknown in_port is a
// ContractViolation.
const FlowEntry* match_packet(const SwitchState& sw, const Packet& pkt, int in_port);

struct ForwardDecision {
    enum class Kind { Forward, Drop, PacketIn };
    Kind kind = Kind::PacketIn;
    int port = 0;

    bool operator==(const ForwardDecision&) const = default;
};

// Table lookup plus counter update. A hit bumps the entry's packet/byte
// counters and last_used before the action is applied; a miss punts to the
// controller (PacketIn).
ForwardDecision process_packet(SwitchState& sw, const Packet& pkt, int in_port, SimTime now);

// Appends, or replaces in place when an entry with identical (match, priority)
// exists (counters reset). Rejects all-wildcard matches, out-of-range
// priority, and Forward actions naming a port the switch lacks.
void install_flow(SwitchState& sw, FlowEntry entry);

// Removes entries idle strictly longer than their idle_timeout. Returns the
// number removed.
int expire_flows(SwitchState& sw, SimTime now);

}  // namespace sdnsim
