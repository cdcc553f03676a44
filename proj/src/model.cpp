#include <charconv>
#include <cstdio>

#include "sdnsim/errors.hpp"
#include "sdnsim/packet.hpp"

namespace sdnsim {

std::string format_seconds(SimTime t) {
    const std::int64_t whole = t.micros / 1'000'000;
    const std::int64_t frac = t.micros % 1'000'000;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%lld.%06lld", static_cast<long long>(whole),
                  static_cast<long long>(frac));
    return buf;
}

std::optional<IpAddr> IpAddr::parse(std::string_view text) {
    std::uint32_t value = 0;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    for (int octet = 0; octet < 4; ++octet) {
        if (octet > 0) {
            if (p == end || *p != '.') return std::nullopt;
            ++p;
        }
        unsigned v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{} || next == p || v > 255) return std::nullopt;
        if (next - p > 3) return std::nullopt;
        value = (value << 8) | v;
        p = next;
    }
    if (p != end) return std::nullopt;
    return IpAddr{value};
}

std::string IpAddr::render() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%u.%u.%u.%u", (value >> 24) & 0xFF, (value >> 16) & 0xFF,
                  (value >> 8) & 0xFF, value & 0xFF);
    return buf;
}

std::string protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Icmp: return "ICMP";
        case Protocol::Tcp: return "TCP";
        case Protocol::Udp: return "UDP";
    }
    return "?";
}

bool packet_invariants_ok(const Packet& pkt) {
    const bool is_icmp = pkt.protocol == Protocol::Icmp;
    const bool is_tcp = pkt.protocol == Protocol::Tcp;
    if (pkt.icmp_type.has_value() != is_icmp) return false;
    if (pkt.src_port.has_value() != is_tcp) return false;
    if (pkt.dst_port.has_value() != is_tcp) return false;
    if (pkt.tcp_flags.has_value() != is_tcp) return false;
    if (pkt.tcp_window.has_value() != is_tcp) return false;
    return true;
}

namespace {

void check_range(std::int64_t v, std::int64_t lo, std::int64_t hi, const char* what) {
    if (v < lo || v > hi) {
        throw ValidationError(std::string(what) + " out of range: " + std::to_string(v));
    }
}

}  // namespace

Packet make_icmp_echo(SeqSource& seqs, IpAddr src, IpAddr dst, std::int64_t payload_len, SimTime now) {
    check_range(payload_len, 0, 0xFFFFFFFF, "payload_len");
    Packet pkt;
    pkt.seq = seqs.next();
    pkt.src_ip = src;
    pkt.dst_ip = dst;
    pkt.protocol = Protocol::Icmp;
    pkt.icmp_type = kIcmpEchoRequest;
    pkt.payload_len = static_cast<std::uint32_t>(payload_len);
    pkt.created_at = now;
    return pkt;
}

Packet make_tcp_syn(SeqSource& seqs, IpAddr src, IpAddr dst, std::int64_t sport, std::int64_t dport,
                    std::int64_t window, std::int64_t payload_len, SimTime now) {
    check_range(sport, 0, 65535, "src_port");
    check_range(dport, 0, 65535, "dst_port");
    check_range(window, 0, 65535, "tcp_window");
    check_range(payload_len, 0, 0xFFFFFFFF, "payload_len");
    Packet pkt;
    pkt.seq = seqs.next();
    pkt.src_ip = src;
    pkt.dst_ip = dst;
    pkt.protocol = Protocol::Tcp;
    pkt.src_port = static_cast<std::uint16_t>(sport);
    pkt.dst_port = static_cast<std::uint16_t>(dport);
    pkt.tcp_flags = TcpFlags::syn();
    pkt.tcp_window = static_cast<std::uint16_t>(window);
    pkt.payload_len = static_cast<std::uint32_t>(payload_len);
    pkt.created_at = now;
    return pkt;
}

}  // namespace sdnsim
