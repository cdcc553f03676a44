#include "sdnsim/hostmodel.hpp"

#include <algorithm>

#include "sdnsim/rng.hpp"

namespace sdnsim {

bool is_bare_syn(const Packet& pkt) {
    return pkt.protocol == Protocol::Tcp && pkt.tcp_flags && *pkt.tcp_flags == TcpFlags::syn();
}

double packet_cost(const Packet& pkt, const CostParams& params) {
    double c = 0;
    if (pkt.protocol == Protocol::Icmp) {
        c = params.cpu_cost_icmp;
    } else if (is_bare_syn(pkt)) {
        c = params.cpu_cost_syn;
    }
    return c * (1.0 + static_cast<double>(pkt.payload_len) / 1500.0);
}

VictimState::VictimState(CostParams params, std::uint64_t core_salt)
    : params_(params), salt_(core_salt) {}

int VictimState::core_of(const Packet& pkt) const {
    std::uint64_t h = salt_ ^ (static_cast<std::uint64_t>(pkt.src_ip.value) * 0x9E3779B97F4A7C15ULL);
    if (pkt.src_port) {
        h ^= (static_cast<std::uint64_t>(*pkt.src_port) + 1) * 0xC2B2AE3D27D4EB4FULL;
    }
    return static_cast<int>(splitmix64(h) & 3);
}

void VictimState::on_packet_delivered(const Packet& pkt, SimTime now) {
    accum_[static_cast<std::size_t>(core_of(pkt))] += packet_cost(pkt, params_);
    if (is_bare_syn(pkt)) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(pkt.src_ip.value) << 16) | pkt.src_port.value_or(0);
        half_open_[key] = now;  // refresh on repeat SYN from the same endpoint
    }
}

ResourceSample VictimState::sample_resources(SimTime now, double interval_s) {
    const Duration timeout = Duration::from_seconds(params_.half_open_timeout_s);
    for (auto it = half_open_.begin(); it != half_open_.end();) {
        if (now - it->second > timeout) {
            it = half_open_.erase(it);
        } else {
            ++it;
        }
    }

    ResourceSample sample;
    sample.at = now;
    for (std::size_t i = 0; i < accum_.size(); ++i) {
        sample.core_util[i] = std::clamp(params_.base_cpu + accum_[i] / interval_s, 0.0, 100.0);
        accum_[i] = 0;
    }
    sample.half_open_count = half_open_count();
    sample.mem = std::clamp(
        params_.base_mem + params_.mem_per_half_open * static_cast<double>(sample.half_open_count),
        0.0, 100.0);
    return sample;
}

}  // namespace sdnsim
