#include "sdnsim/botnet.hpp"

#include <cmath>

#include "sdnsim/errors.hpp"

namespace sdnsim {

std::string attack_kind_name(AttackKind k) {
    return k == AttackKind::IcmpFlood ? "icmp_flood" : "syn_flood";
}

std::vector<Violation> validate_attack_spec(const AttackSpec& spec) {
    std::vector<Violation> out;
    auto add = [&](std::string code, std::string detail) {
        out.push_back(Violation{std::move(code), std::move(detail)});
    };
    if (!(spec.rate_pps > 0)) add("attack-rate", "rate_pps must be > 0");
    if (spec.rate_pps > 1e6) add("attack-rate", "rate_pps above 1e6 exceeds the 1 us clock");
    if (!(spec.duration_s > 0)) add("attack-duration", "duration_s must be > 0");
    if (spec.ramp_s < 0) add("attack-ramp", "ramp_s must be >= 0");
    if (spec.start < SimTime::zero()) add("attack-start", "start must be >= 0");
    const bool is_syn = spec.kind == AttackKind::SynFlood;
    if (spec.tcp_window.has_value() != is_syn) {
        add("attack-tcp-window", is_syn ? "syn_flood requires tcp_window" : "tcp_window is syn_flood only");
    }
    if (spec.dport.has_value() != is_syn) {
        add("attack-dport", is_syn ? "syn_flood requires dport" : "dport is syn_flood only");
    }
    return out;
}

Botmaster::Botmaster(const TopologyGraph& topo, Duration c2_delay)
    : topo_(&topo), c2_delay_(c2_delay) {}

void Botmaster::infect(const NodeId& host, SimTime now) {
    if (!host.is_host() || !topo_->contains(host)) {
        throw ValidationError("cannot infect " + host.name + ": not a host in the topology");
    }
    auto role = topo_->roles.find(host);
    if (role != topo_->roles.end() && role->second == HostRole::Victim) {
        throw ValidationError("cannot infect the victim host " + host.name);
    }
    if (zombies_.count(host)) return;
    auto addr = topo_->host_addrs.find(host);
    if (addr == topo_->host_addrs.end()) {
        throw ValidationError("host " + host.name + " has no address");
    }
    zombies_.emplace(host, ZombieState{host, addr->second, now, std::nullopt, 0});
}

std::vector<C2Delivery> Botmaster::issue_attack(const AttackSpec& spec, SimTime now) {
    if (zombies_.empty()) throw ValidationError("no botnet: no host is infected");
    auto violations = validate_attack_spec(spec);
    if (!violations.empty()) throw ValidationError("invalid attack spec: " + violations.front().message());
    history_.push_back(spec);
    std::vector<C2Delivery> deliveries;
    deliveries.reserve(zombies_.size());
    for (const auto& [host, z] : zombies_) {
        deliveries.push_back(C2Delivery{host, now + c2_delay_});
    }
    return deliveries;
}

void Botmaster::deliver_order(const NodeId& zombie, SimTime now) {
    auto it = zombies_.find(zombie);
    if (it == zombies_.end()) throw ContractViolation("order for uninfected host " + zombie.name);
    it->second.order_received_at = now;
}

void Botmaster::cleanup(SimTime) {
    zombies_.clear();
    history_.clear();
}

namespace {

// Offset of the n-th packet after order receipt: the time where the integral
// of the ramped rate reaches n.
double emission_offset_s(std::uint64_t n, double rate_pps, double ramp_s) {
    const double nd = static_cast<double>(n);
    if (ramp_s > 0 && nd <= rate_pps * ramp_s / 2.0) {
        return std::sqrt(2.0 * nd * ramp_s / rate_pps);
    }
    return nd / rate_pps + ramp_s / 2.0;
}

constexpr std::uint16_t kEphemeralBase = 40000;
constexpr std::uint32_t kEphemeralSpan = 65536 - kEphemeralBase;

}  // namespace

std::optional<Emission> zombie_next_emission(ZombieState& z, const AttackSpec& spec, SeqSource& seqs) {
    if (!z.order_received_at) return std::nullopt;
    const std::uint64_t n = z.emitted_count + 1;
    const double offset_s = emission_offset_s(n, spec.rate_pps, spec.ramp_s);
    if (offset_s > spec.duration_s) return std::nullopt;
    const SimTime at = *z.order_received_at + Duration::from_seconds(offset_s);

    Packet pkt;
    if (spec.kind == AttackKind::IcmpFlood) {
        pkt = make_icmp_echo(seqs, z.ip, spec.target_ip, spec.payload_len, at);
    } else {
        const std::uint16_t sport =
            static_cast<std::uint16_t>(kEphemeralBase + (z.emitted_count % kEphemeralSpan));
        pkt = make_tcp_syn(seqs, z.ip, spec.target_ip, sport, spec.dport.value_or(80),
                           spec.tcp_window.value_or(0), spec.payload_len, at);
    }
    z.emitted_count = n;
    return Emission{std::move(pkt), at};
}

}  // namespace sdnsim
