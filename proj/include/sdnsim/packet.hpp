#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "sdnsim/ip_addr.hpp"
#include "sdnsim/sim_time.hpp"

namespace sdnsim {

enum class Protocol { Icmp, Tcp, Udp };

std::string protocol_name(Protocol p);  // "ICMP" / "TCP" / "UDP"

// TCP flag set. Bits are independent; the empty set is valid.
struct TcpFlags {
    enum : std::uint8_t {
        Fin = 1 << 0,
        Syn = 1 << 1,
        Rst = 1 << 2,
        Psh = 1 << 3,
        Ack = 1 << 4,
        Urg = 1 << 5,
    };

    std::uint8_t bits = 0;

    static TcpFlags none() { return TcpFlags{}; }
    static TcpFlags syn() { return TcpFlags{Syn}; }

    bool has(std::uint8_t bit) const { return (bits & bit) != 0; }
    bool contains(TcpFlags other) const { return (bits & other.bits) == other.bits; }
    bool empty() const { return bits == 0; }

    auto operator<=>(const TcpFlags&) const = default;
};

constexpr int kIcmpEchoRequest = 8;

// One simulated datagram. Protocol-specific fields are optional and must be
// present exactly when the protocol calls for them (see packet_invariants_ok).
struct Packet {
    std::uint64_t seq = 0;  // unique, strictly increasing in construction order
    IpAddr src_ip;
    IpAddr dst_ip;
    Protocol protocol = Protocol::Icmp;
    std::optional<int> icmp_type;
    std::optional<std::uint16_t> src_port;
    std::optional<std::uint16_t> dst_port;
    std::optional<TcpFlags> tcp_flags;
    std::optional<std::uint16_t> tcp_window;
    std::uint32_t payload_len = 0;
    SimTime created_at;
};

bool packet_invariants_ok(const Packet& pkt);

// Hands out packet sequence numbers. One source per scenario keeps runs
// reproducible; numbers start at 1.
class SeqSource {
  public:
    std::uint64_t next() { return next_++; }

  private:
    std::uint64_t next_ = 1;
};

// ICMP echo request (type 8). payload_len is an abstract byte count; no
// fragmentation is modeled.
Packet make_icmp_echo(SeqSource& seqs, IpAddr src, IpAddr dst, std::int64_t payload_len, SimTime now);

// TCP segment with flags exactly {SYN}. Ports and window are validated
// against 0..65535; out-of-range values raise ValidationError.
Packet make_tcp_syn(SeqSource& seqs, IpAddr src, IpAddr dst, std::int64_t sport, std::int64_t dport,
                    std::int64_t window, std::int64_t payload_len, SimTime now);

}  // namespace sdnsim
