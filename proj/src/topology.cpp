#include "sdnsim/topology.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "sdnsim/errors.hpp"

namespace sdnsim {

std::string host_role_name(HostRole r) {
    switch (r) {
        case HostRole::Normal: return "normal";
        case HostRole::Zombie: return "zombie";
        case HostRole::Victim: return "victim";
    }
    return "?";
}

void TopologyGraph::rebuild_index() {
    adjacency_.clear();
    addr_index_.clear();
    for (const auto& node : nodes) adjacency_[node];  // ensure every node has an entry
    for (const auto& link : links) {
        adjacency_[link.a.node].push_back(Adjacent{link.a.port, link.b, link.latency_us});
        adjacency_[link.b.node].push_back(Adjacent{link.b.port, link.a, link.latency_us});
    }
    for (auto& [node, adj] : adjacency_) {
        std::sort(adj.begin(), adj.end(), [](const Adjacent& x, const Adjacent& y) {
            return std::tie(x.peer.node, x.local_port) < std::tie(y.peer.node, y.local_port);
        });
    }
    for (const auto& [host, addr] : host_addrs) addr_index_.emplace(addr, host);
}

const std::vector<TopologyGraph::Adjacent>& TopologyGraph::neighbors(const NodeId& n) const {
    static const std::vector<Adjacent> kEmpty;
    auto it = adjacency_.find(n);
    return it == adjacency_.end() ? kEmpty : it->second;
}

std::optional<TopologyGraph::Adjacent> TopologyGraph::peer_of(const NodeId& n, int port) const {
    for (const auto& adj : neighbors(n)) {
        if (adj.local_port == port) return adj;
    }
    return std::nullopt;
}

std::optional<int> TopologyGraph::port_towards(const NodeId& from, const NodeId& to) const {
    for (const auto& adj : neighbors(from)) {
        if (adj.peer.node == to) return adj.local_port;
    }
    return std::nullopt;
}

std::optional<NodeId> TopologyGraph::host_with_addr(IpAddr addr) const {
    auto it = addr_index_.find(addr);
    if (it == addr_index_.end()) return std::nullopt;
    return it->second;
}

bool TopologyGraph::contains(const NodeId& n) const {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
}

std::optional<NodeId> TopologyGraph::victim() const {
    for (const auto& [host, role] : roles) {
        if (role == HostRole::Victim) return host;
    }
    return std::nullopt;
}

std::vector<NodeId> TopologyGraph::hosts() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes) {
        if (n.is_host()) out.push_back(n);
    }
    return out;
}

std::vector<NodeId> TopologyGraph::switches() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes) {
        if (n.is_switch()) out.push_back(n);
    }
    return out;
}

TopologyGraph build_reference_topology() {
    TopologyGraph g;
    const auto s = [](int i) { return NodeId::sw("s" + std::to_string(i)); };
    const auto h = [](int i) { return NodeId::host("h" + std::to_string(i)); };

    for (int i = 1; i <= 7; ++i) g.nodes.push_back(s(i));
    for (int i = 1; i <= 20; ++i) g.nodes.push_back(h(i));

    const std::int64_t lat = 100;
    auto link = [&](NodeId a, int ap, NodeId b, int bp) {
        g.links.push_back(Link{Endpoint{std::move(a), ap}, Endpoint{std::move(b), bp}, lat});
    };

    // Core to distribution, distribution to access.
    link(s(1), 1, s(2), 1);
    link(s(1), 2, s(3), 1);
    link(s(2), 2, s(4), 1);
    link(s(2), 3, s(5), 1);
    link(s(3), 2, s(6), 1);
    link(s(3), 3, s(7), 1);

    // Five consecutive hosts per access switch: h1..h5 on s4, ..., h16..h20 on s7.
    for (int i = 1; i <= 20; ++i) {
        const int access = 4 + (i - 1) / 5;
        const int port = 2 + (i - 1) % 5;
        link(s(access), port, h(i), 1);
        g.host_addrs[h(i)] = IpAddr::parse("10.0.0." + std::to_string(i)).value();
        g.roles[h(i)] = i <= 5 ? HostRole::Zombie : (i == 20 ? HostRole::Victim : HostRole::Normal);
    }

    g.rebuild_index();
    return g;
}

std::vector<Violation> validate_topology(const TopologyGraph& g) {
    std::vector<Violation> out;
    auto add = [&](std::string code, std::string detail) {
        out.push_back(Violation{std::move(code), std::move(detail)});
    };

    std::set<NodeId> seen;
    for (const auto& n : g.nodes) {
        if (!seen.insert(n).second) add("duplicate-node", n.name);
    }

    std::set<std::pair<NodeId, int>> used_ports;
    for (const auto& link : g.links) {
        if (link.a.node == link.b.node) add("self-link", link.a.node.name);
        for (const auto& ep : {link.a, link.b}) {
            if (!seen.count(ep.node)) add("dangling-endpoint", ep.node.name);
            if (!used_ports.insert({ep.node, ep.port}).second) {
                add("duplicate-port", ep.node.name + ":" + std::to_string(ep.port));
            }
        }
        if (link.latency_us <= 0) {
            add("nonpositive-latency", link.a.node.name + "-" + link.b.node.name);
        }
    }

    std::set<IpAddr> addrs;
    for (const auto& n : g.nodes) {
        if (!n.is_host()) continue;
        auto it = g.host_addrs.find(n);
        if (it == g.host_addrs.end()) {
            add("host-without-address", n.name);
        } else if (!addrs.insert(it->second).second) {
            add("duplicate-address", it->second.render() + " (" + n.name + ")");
        }
        int degree = 0;
        bool to_switch_only = true;
        for (const auto& link : g.links) {
            for (const auto& [self, other] : {std::pair{link.a, link.b}, std::pair{link.b, link.a}}) {
                if (self.node == n) {
                    ++degree;
                    if (!other.node.is_switch()) to_switch_only = false;
                }
            }
        }
        if (degree > 1) add("multi-homed-host", n.name);
        if (degree == 1 && !to_switch_only) add("host-linked-to-host", n.name);
    }

    // Connectivity over the whole node set.
    if (!g.nodes.empty()) {
        std::set<NodeId> visited;
        std::deque<NodeId> frontier{g.nodes.front()};
        visited.insert(g.nodes.front());
        while (!frontier.empty()) {
            NodeId cur = frontier.front();
            frontier.pop_front();
            for (const auto& adj : g.neighbors(cur)) {
                if (visited.insert(adj.peer.node).second) frontier.push_back(adj.peer.node);
            }
        }
        for (const auto& n : g.nodes) {
            if (!visited.count(n)) add("disconnected", n.name);
        }
    }

    int victims = 0;
    for (const auto& [host, role] : g.roles) {
        if (!seen.count(host)) add("role-for-unknown-host", host.name);
        if (role == HostRole::Victim) ++victims;
    }
    if (victims == 0) add("missing-victim", "no host has role victim");
    if (victims > 1) add("multiple-victims", std::to_string(victims) + " hosts have role victim");

    return out;
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) throw ValidationError("unknown key \"" + it.key() + "\" in " + where);
    }
}

}  // namespace

TopologyGraph load_topology(const nlohmann::json& config) {
    if (config.is_string()) {
        if (config.get<std::string>() == "reference") return build_reference_topology();
        throw ValidationError("topology string must be \"reference\", got \"" +
                              config.get<std::string>() + "\"");
    }
    if (!config.is_object()) throw ValidationError("topology must be \"reference\" or an object");
    reject_unknown_keys(config, {"switches", "hosts", "links"}, "topology");

    TopologyGraph g;
    std::set<std::string> switch_names;
    for (const auto& sw : config.value("switches", nlohmann::json::array())) {
        if (!sw.is_string()) throw ValidationError("topology.switches entries must be strings");
        g.nodes.push_back(NodeId::sw(sw.get<std::string>()));
        switch_names.insert(sw.get<std::string>());
    }
    for (const auto& host : config.value("hosts", nlohmann::json::array())) {
        if (!host.is_object()) throw ValidationError("topology.hosts entries must be objects");
        reject_unknown_keys(host, {"name", "ip"}, "topology.hosts entry");
        if (!host.contains("name") || !host.contains("ip")) {
            throw ValidationError("topology.hosts entries need name and ip");
        }
        NodeId id = NodeId::host(host.at("name").get<std::string>());
        auto addr = IpAddr::parse(host.at("ip").get<std::string>());
        if (!addr) {
            throw ValidationError("bad host address \"" + host.at("ip").get<std::string>() + "\"");
        }
        g.host_addrs[id] = *addr;
        g.roles[id] = HostRole::Normal;
        g.nodes.push_back(std::move(id));
    }
    auto node_by_name = [&](const std::string& name) {
        return switch_names.count(name) ? NodeId::sw(name) : NodeId::host(name);
    };
    for (const auto& link : config.value("links", nlohmann::json::array())) {
        if (!link.is_object()) throw ValidationError("topology.links entries must be objects");
        reject_unknown_keys(link, {"a", "a_port", "b", "b_port", "latency_us"}, "topology.links entry");
        for (const char* k : {"a", "a_port", "b", "b_port"}) {
            if (!link.contains(k)) throw ValidationError(std::string("topology.links entry needs ") + k);
        }
        g.links.push_back(Link{
            Endpoint{node_by_name(link.at("a").get<std::string>()), link.at("a_port").get<int>()},
            Endpoint{node_by_name(link.at("b").get<std::string>()), link.at("b_port").get<int>()},
            link.value("latency_us", std::int64_t{100})});
    }
    g.rebuild_index();
    return g;
}

}  // namespace sdnsim
