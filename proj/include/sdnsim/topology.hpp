#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "sdnsim/ip_addr.hpp"

namespace sdnsim {

enum class NodeKind { Switch, Host };

struct NodeId {
    NodeKind kind = NodeKind::Switch;
    std::string name;

    static NodeId sw(std::string n) { return NodeId{NodeKind::Switch, std::move(n)}; }
    static NodeId host(std::string n) { return NodeId{NodeKind::Host, std::move(n)}; }

    bool is_host() const { return kind == NodeKind::Host; }
    bool is_switch() const { return kind == NodeKind::Switch; }

    // Ordered by name first so path tie-breaking is lexicographic on the id.
    auto operator<=>(const NodeId& o) const { return std::tie(name, kind) <=> std::tie(o.name, o.kind); }
    bool operator==(const NodeId& o) const { return kind == o.kind && name == o.name; }
};

struct Endpoint {
    NodeId node;
    int port = 0;
    bool operator==(const Endpoint&) const = default;
};

struct Link {
    Endpoint a;
    Endpoint b;
    std::int64_t latency_us = 100;
};

enum class HostRole { Normal, Zombie, Victim };

std::string host_role_name(HostRole r);

struct Violation {
    std::string code;
    std::string detail;
    std::string message() const { return code + ": " + detail; }
};

// Immutable after construction (call rebuild_index() once the node/link lists
// are final). Hosts carry an address and a role; switches carry neither.
struct TopologyGraph {
    std::vector<NodeId> nodes;  // construction order, preserved in listings
    std::vector<Link> links;
    std::map<NodeId, IpAddr> host_addrs;
    std::map<NodeId, HostRole> roles;

    struct Adjacent {
        int local_port = 0;
        Endpoint peer;
        std::int64_t latency_us = 0;
    };

    void rebuild_index();

    // Neighbors sorted by peer node id; empty for unknown nodes.
    const std::vector<Adjacent>& neighbors(const NodeId& n) const;
    std::optional<TopologyGraph::Adjacent> peer_of(const NodeId& n, int port) const;
    // Port on `from` of the (unique) from--to link, if any.
    std::optional<int> port_towards(const NodeId& from, const NodeId& to) const;
    std::optional<NodeId> host_with_addr(IpAddr addr) const;
    bool contains(const NodeId& n) const;
    std::optional<NodeId> victim() const;

    std::vector<NodeId> hosts() const;
    std::vector<NodeId> switches() const;

  private:
    std::map<NodeId, std::vector<Adjacent>> adjacency_;
    std::map<IpAddr, NodeId> addr_index_;
};

// The stock experiment fabric: core s1, distribution s2/s3, access s4..s7,
// hosts h1..h20 at 10.0.0.1..20 with five hosts per access switch. h1..h5 are
// zombies, h20 is the victim. All links 100 us.
TopologyGraph build_reference_topology();

// Empty result means every structural and role invariant holds.
std::vector<Violation> validate_topology(const TopologyGraph& g);

// Builds a graph from the scenario document's "topology" section: either the
// string "reference" or {switches, hosts, links}. Shape errors (wrong types,
// unknown keys, unparsable addresses) throw ValidationError; semantic problems
// are left for validate_topology.
TopologyGraph load_topology(const nlohmann::json& config);

}  // namespace sdnsim
