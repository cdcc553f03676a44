#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>

#include "sdnsim/packet.hpp"
#include "sdnsim/sim_time.hpp"

namespace sdnsim {

// Victim resource-model constants. CPU costs are core-percent-seconds per
// packet unit; the defaults are calibration values fixed against the stock
// flood scenarios.
struct CostParams {
    double base_cpu = 5.0;   // percent
    double base_mem = 15.0;  // percent
    double cpu_cost_icmp = 0.007;
    double cpu_cost_syn = 0.000125;
    double mem_per_half_open = 0.00043;  // percent per table entry
    double half_open_timeout_s = 30.0;
    static constexpr int kCores = 4;
};

struct ResourceSample {
    SimTime at;
    std::array<double, CostParams::kCores> core_util{};  // percent, clamped to [0, 100]
    double mem = 0;                                      // percent, clamped to [0, 100]
    std::int64_t half_open_count = 0;
};

// True for TCP segments whose flag set is exactly {SYN}.
bool is_bare_syn(const Packet& pkt);

// cost = c_proto * (1 + payload_len / 1500); c_proto is the ICMP constant for
// ICMP, the SYN constant for bare SYNs, and zero otherwise.
double packet_cost(const Packet& pkt, const CostParams& params);

// Victim host: accumulates per-core CPU cost between samples and tracks
// half-open TCP connections keyed by (src addr, src port).
class VictimState {
  public:
    VictimState(CostParams params, std::uint64_t core_salt);

    // Adds the packet's cost to one of the four cores (keyed by a salted hash
    // of source address and port) and records bare SYNs as half-open entries.
    void on_packet_delivered(const Packet& pkt, SimTime now);

    // Evicts half-open entries older than the timeout, converts the interval's
    // accumulated cost to utilization, clamps, and resets the accumulators.
    ResourceSample sample_resources(SimTime now, double interval_s);

    int core_of(const Packet& pkt) const;
    std::int64_t half_open_count() const { return static_cast<std::int64_t>(half_open_.size()); }
    const CostParams& params() const { return params_; }

  private:
    CostParams params_;
    std::uint64_t salt_;
    std::array<double, CostParams::kCores> accum_{};
    std::unordered_map<std::uint64_t, SimTime> half_open_;  // key -> last SYN arrival
};

}  // namespace sdnsim
