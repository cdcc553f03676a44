#include "sdnsim/controller.hpp"

#include <algorithm>
#include <deque>

#include "sdnsim/errors.hpp"

namespace sdnsim {

std::vector<NodeId> shortest_path(const TopologyGraph& topo, const NodeId& src, const NodeId& dst) {
    if (!topo.contains(src)) throw ValidationError("shortest_path: unknown node " + src.name);
    if (!topo.contains(dst)) throw ValidationError("shortest_path: unknown node " + dst.name);
    if (src == dst) return {src};

    // Neighbors come back sorted by node id, so the first parent assignment
    // is the lexicographically preferred one among equal-length paths.
    std::map<NodeId, NodeId> parent;
    std::deque<NodeId> frontier{src};
    parent.emplace(src, src);
    while (!frontier.empty()) {
        NodeId cur = frontier.front();
        frontier.pop_front();
        for (const auto& adj : topo.neighbors(cur)) {
            if (parent.emplace(adj.peer.node, cur).second) {
                if (adj.peer.node == dst) {
                    std::vector<NodeId> path{dst};
                    for (NodeId n = cur; ; n = parent.at(n)) {
                        path.push_back(n);
                        if (n == src) break;
                    }
                    std::reverse(path.begin(), path.end());
                    return path;
                }
                frontier.push_back(adj.peer.node);
            }
        }
    }
    throw NoPathError("no path from " + src.name + " to " + dst.name);
}

Controller::Controller(const TopologyGraph& topo, Duration flow_idle, int flow_priority)
    : topo_(&topo), flow_idle_(flow_idle), flow_priority_(flow_priority) {
    for (const auto& host : topo.hosts()) {
        const auto& adj = topo.neighbors(host);
        auto addr_it = topo.host_addrs.find(host);
        if (adj.size() != 1 || addr_it == topo.host_addrs.end()) continue;
        host_locations_[addr_it->second] = HostLocation{adj.front().peer.node, adj.front().peer.port};
        host_by_addr_[addr_it->second] = host;
    }
}

std::pair<std::vector<FlowMod>, PacketOutDirective> Controller::handle_packet_in(
    const NodeId& from_switch, const Packet& pkt, int in_port, SimTime now) {
    stats_.packet_in_count++;

    auto dst_it = host_by_addr_.find(pkt.dst_ip);
    if (dst_it == host_by_addr_.end()) {
        return {{}, PacketOutDirective{PacketOutDirective::Kind::Drop, from_switch, in_port}};
    }

    // Anchor the route at the sending host when its address is known, else at
    // the switch that punted the packet.
    auto src_it = host_by_addr_.find(pkt.src_ip);
    const NodeId anchor = src_it != host_by_addr_.end() ? src_it->second : from_switch;
    if (anchor == dst_it->second) {
        // Self-addressed traffic has no business on the fabric.
        return {{}, PacketOutDirective{PacketOutDirective::Kind::Drop, from_switch, in_port}};
    }
    const std::vector<NodeId> path = shortest_path(*topo_, anchor, dst_it->second);

    std::vector<FlowMod> mods;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (!path[i].is_switch()) continue;
        auto out_port = topo_->port_towards(path[i], path[i + 1]);
        if (!out_port) throw ContractViolation("path step without a link: " + path[i].name);
        FlowEntry entry;
        entry.match.dst_ip = pkt.dst_ip;
        entry.priority = flow_priority_;
        entry.action = FlowAction::forward(*out_port);
        entry.idle_timeout = flow_idle_;
        entry.installed_at = now;
        entry.last_used = now;
        mods.push_back(FlowMod{path[i], std::move(entry)});
    }
    stats_.flow_mods_issued += mods.size();
    return {std::move(mods),
            PacketOutDirective{PacketOutDirective::Kind::Reinject, from_switch, in_port}};
}

}  // namespace sdnsim
