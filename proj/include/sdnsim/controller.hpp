#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdnsim/dataplane.hpp"
#include "sdnsim/packet.hpp"
#include "sdnsim/topology.hpp"

namespace sdnsim {

struct NoPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimum-hop path over unit-weight links. Among equal-length paths the BFS
// expands neighbors in ascending node-id order, so the lexicographically
// smallest next hop wins. path.front() == src, path.back() == dst.
// Disconnected pairs raise NoPathError; unknown endpoints ValidationError.
std::vector<NodeId> shortest_path(const TopologyGraph& topo, const NodeId& src, const NodeId& dst);

struct FlowMod {
    NodeId target;
    FlowEntry entry;
};

struct PacketOutDirective {
    enum class Kind { Reinject, Drop };
    Kind kind = Kind::Drop;
    NodeId at_switch;
    int in_port = 0;
};

struct ControllerStats {
    std::uint64_t packet_in_count = 0;
    std::uint64_t flow_mods_issued = 0;
};

// Reactive controller: provisioned with the full topology up front, installs
// destination-IP routes along the BFS path on each packet-in.
class Controller {
  public:
    explicit Controller(const TopologyGraph& topo,
                        Duration flow_idle = Duration::from_seconds(60),
                        int flow_priority = 10);

    // Known destination: one FlowMod per switch on the src-host -> dst-host
    // path plus a reinject directive at the punting switch. Unknown
    // destination: no mods, drop.
    std::pair<std::vector<FlowMod>, PacketOutDirective> handle_packet_in(const NodeId& from_switch,
                                                                         const Packet& pkt, int in_port,
                                                                         SimTime now);

    const ControllerStats& stats() const { return stats_; }

    struct HostLocation {
        NodeId attachment_switch;
        int port = 0;
    };
    const std::map<IpAddr, HostLocation>& host_locations() const { return host_locations_; }

  private:
    const TopologyGraph* topo_;
    Duration flow_idle_;
    int flow_priority_;
    std::map<IpAddr, HostLocation> host_locations_;
    std::map<IpAddr, NodeId> host_by_addr_;
    ControllerStats stats_;
};

}  // namespace sdnsim
