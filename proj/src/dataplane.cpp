#include "sdnsim/dataplane.hpp"

#include <algorithm>

#include "sdnsim/errors.hpp"

namespace sdnsim {

bool FlowMatch::matches(const Packet& pkt, int port) const {
    if (dst_ip && *dst_ip != pkt.dst_ip) return false;
    if (src_ip && *src_ip != pkt.src_ip) return false;
    if (protocol && *protocol != pkt.protocol) return false;
    if (in_port && *in_port != port) return false;
    return true;
}

const FlowEntry* match_packet(const SwitchState& sw, const Packet& pkt, int in_port) {
    if (!sw.ports.count(in_port)) {
        throw ContractViolation("switch " + sw.id.name + " has no port " +
                                std::to_string(in_port));
    }
    const FlowEntry* best = nullptr;
    for (const auto& entry : sw.table) {
        if (!entry.match.matches(pkt, in_port)) continue;
        // Table position is installation order, so '>' keeps the earliest
        // entry among equal priorities.
        if (!best || entry.priority > best->priority) best = &entry;
    }
    return best;
}

ForwardDecision process_packet(SwitchState& sw, const Packet& pkt, int in_port, SimTime now) {
    FlowEntry* hit = const_cast<FlowEntry*>(match_packet(sw, pkt, in_port));
    if (!hit) {
        sw.counters.packets_punted++;
        return ForwardDecision{ForwardDecision::Kind::PacketIn, 0};
    }
    hit->packet_count++;
    hit->byte_count += pkt.payload_len;
    hit->last_used = now;
    sw.counters.packets_matched++;
    switch (hit->action.kind) {
        case FlowAction::Kind::Forward:
            if (!sw.ports.count(hit->action.port)) {
                throw ContractViolation("flow on " + sw.id.name + " forwards to missing port " +
                                        std::to_string(hit->action.port));
            }
            return ForwardDecision{ForwardDecision::Kind::Forward, hit->action.port};
        case FlowAction::Kind::Drop:
            return ForwardDecision{ForwardDecision::Kind::Drop, 0};
        case FlowAction::Kind::ToController:
            sw.counters.packets_punted++;
            return ForwardDecision{ForwardDecision::Kind::PacketIn, 0};
    }
    throw ContractViolation("unhandled flow action");
}

void install_flow(SwitchState& sw, FlowEntry entry) {
    if (!entry.match.has_any_field()) {
        throw ValidationError("all-wildcard flow match rejected on " + sw.id.name);
    }
    if (entry.priority < 0 || entry.priority > 65535) {
        throw ValidationError("flow priority out of range: " + std::to_string(entry.priority));
    }
    if (entry.action.kind == FlowAction::Kind::Forward && !sw.ports.count(entry.action.port)) {
        throw ValidationError("switch " + sw.id.name + " has no port " +
                              std::to_string(entry.action.port));
    }
    if (entry.match.in_port && !sw.ports.count(*entry.match.in_port)) {
        throw ValidationError("switch " + sw.id.name + " has no port " +
                              std::to_string(*entry.match.in_port));
    }
    entry.packet_count = 0;
    entry.byte_count = 0;
    entry.last_used = entry.installed_at;
    for (auto& existing : sw.table) {
        if (existing.match == entry.match && existing.priority == entry.priority) {
            existing = std::move(entry);  // replace in place, counters reset
            sw.counters.flows_installed++;
            return;
        }
    }
    sw.table.push_back(std::move(entry));
    sw.counters.flows_installed++;
}

int expire_flows(SwitchState& sw, SimTime now) {
    auto expired = [&](const FlowEntry& e) { return now - e.last_used > e.idle_timeout; };
    const auto first = std::remove_if(sw.table.begin(), sw.table.end(), expired);
    const int removed = static_cast<int>(sw.table.end() - first);
    sw.table.erase(first, sw.table.end());
    sw.counters.flows_expired += removed;
    return removed;
}

}  // namespace sdnsim
