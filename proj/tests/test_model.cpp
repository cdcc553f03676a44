#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sdnsim/errors.hpp"
#include "sdnsim/packet.hpp"
#include "sdnsim/rng.hpp"

using namespace sdnsim;

namespace {
IpAddr ip(const char* s) { return IpAddr::parse(s).value(); }
}  // namespace

TEST_CASE("icmp echo construction") {
    SeqSource seqs;
    const SimTime t = SimTime::from_seconds(1.5);
    const Packet pkt = make_icmp_echo(seqs, ip("10.0.0.1"), ip("10.0.0.20"), 1500, t);
    CHECK(pkt.protocol == Protocol::Icmp);
    CHECK(pkt.icmp_type == kIcmpEchoRequest);
    CHECK(pkt.payload_len == 1500);
    CHECK(pkt.src_ip == ip("10.0.0.1"));
    CHECK(pkt.dst_ip == ip("10.0.0.20"));
    CHECK(pkt.created_at == t);
    CHECK_FALSE(pkt.src_port.has_value());
    CHECK_FALSE(pkt.tcp_flags.has_value());
    CHECK_FALSE(pkt.tcp_window.has_value());
    CHECK(packet_invariants_ok(pkt));
}

TEST_CASE("self-addressed echo with empty payload is valid") {
    SeqSource seqs;
    const Packet pkt = make_icmp_echo(seqs, ip("10.0.0.7"), ip("10.0.0.7"), 0, SimTime::zero());
    CHECK(pkt.payload_len == 0);
    CHECK(pkt.src_ip == pkt.dst_ip);
    CHECK(packet_invariants_ok(pkt));
}

TEST_CASE("sequence numbers strictly increase") {
    SeqSource seqs;
    const Packet a = make_icmp_echo(seqs, ip("10.0.0.1"), ip("10.0.0.2"), 64, SimTime::zero());
    const Packet b = make_icmp_echo(seqs, ip("10.0.0.1"), ip("10.0.0.2"), 64, SimTime::zero());
    CHECK(b.seq > a.seq);

    std::uint64_t prev = b.seq;
    for (int i = 0; i < 1000; ++i) {
        const Packet p = make_tcp_syn(seqs, ip("10.0.0.1"), ip("10.0.0.2"), 40000, 80, 64, 0,
                                      SimTime::zero());
        CHECK(p.seq > prev);
        prev = p.seq;
    }
}

TEST_CASE("tcp syn construction") {
    SeqSource seqs;
    const Packet pkt = make_tcp_syn(seqs, ip("10.0.0.2"), ip("10.0.0.20"), 40000, 80, 64, 100000,
                                    SimTime::from_seconds(2));
    CHECK(pkt.protocol == Protocol::Tcp);
    CHECK(pkt.tcp_flags == TcpFlags::syn());
    CHECK_FALSE(pkt.tcp_flags->has(TcpFlags::Ack));
    CHECK(pkt.tcp_window == 64);
    CHECK(pkt.payload_len == 100000);
    CHECK(pkt.src_port == 40000);
    CHECK(pkt.dst_port == 80);
    CHECK_FALSE(pkt.icmp_type.has_value());
    CHECK(packet_invariants_ok(pkt));
}

TEST_CASE("tcp syn rejects out-of-range inputs") {
    SeqSource seqs;
    const auto t = SimTime::zero();
    CHECK_THROWS_AS(make_tcp_syn(seqs, ip("10.0.0.1"), ip("10.0.0.2"), 40000, 80, 70000, 0, t),
                    ValidationError);
    CHECK_THROWS_AS(make_tcp_syn(seqs, ip("10.0.0.1"), ip("10.0.0.2"), 70000, 80, 64, 0, t),
                    ValidationError);
    CHECK_THROWS_AS(make_tcp_syn(seqs, ip("10.0.0.1"), ip("10.0.0.2"), 40000, -1, 64, 0, t),
                    ValidationError);
    CHECK_THROWS_AS(make_tcp_syn(seqs, ip("10.0.0.1"), ip("10.0.0.2"), 40000, 80, 64, -5, t),
                    ValidationError);
    CHECK_THROWS_AS(make_icmp_echo(seqs, ip("10.0.0.1"), ip("10.0.0.2"), -1, t), ValidationError);
}

TEST_CASE("protocol invariants hold over random constructor inputs") {
    SeqSource seqs;
    DetRng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const IpAddr src{static_cast<std::uint32_t>(rng.next_u64())};
        const IpAddr dst{static_cast<std::uint32_t>(rng.next_u64())};
        const auto payload = static_cast<std::int64_t>(rng.below(200000));
        const SimTime t = SimTime::from_micros(static_cast<std::int64_t>(rng.below(86400000000ULL)));
        Packet pkt;
        if (rng.coin()) {
            pkt = make_icmp_echo(seqs, src, dst, payload, t);
        } else {
            pkt = make_tcp_syn(seqs, src, dst, static_cast<std::int64_t>(rng.below(65536)),
                               static_cast<std::int64_t>(rng.below(65536)),
                               static_cast<std::int64_t>(rng.below(65536)), payload, t);
        }
        REQUIRE(packet_invariants_ok(pkt));
        REQUIRE(pkt.payload_len == static_cast<std::uint32_t>(payload));
    }
}

TEST_CASE("ip address parse/render round trip") {
    CHECK(ip("10.0.0.1").render() == "10.0.0.1");
    CHECK(ip("0.0.0.0").render() == "0.0.0.0");
    CHECK(ip("255.255.255.255").render() == "255.255.255.255");

    DetRng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const IpAddr a{static_cast<std::uint32_t>(rng.next_u64())};
        REQUIRE(IpAddr::parse(a.render()) == a);
    }
}

TEST_CASE("ip address parse rejects malformed text") {
    CHECK_FALSE(IpAddr::parse(""));
    CHECK_FALSE(IpAddr::parse("10.0.0"));
    CHECK_FALSE(IpAddr::parse("10.0.0.256"));
    CHECK_FALSE(IpAddr::parse("10.0.0.1.2"));
    CHECK_FALSE(IpAddr::parse("10..0.1"));
    CHECK_FALSE(IpAddr::parse("a.b.c.d"));
    CHECK_FALSE(IpAddr::parse("10.0.0.1 "));
    CHECK_FALSE(IpAddr::parse("-1.0.0.1"));
}

TEST_CASE("sim time arithmetic and rendering") {
    const SimTime t = SimTime::from_seconds(9.001125);
    CHECK(t.micros == 9001125);
    CHECK(format_seconds(t) == "9.001125");
    CHECK(format_seconds(SimTime::zero()) == "0.000000");
    CHECK(format_seconds(SimTime::from_seconds(5)) == "5.000000");

    const SimTime later = t + Duration::from_seconds(0.5);
    CHECK((later - t).seconds() == doctest::Approx(0.5));
    CHECK(later > t);

    // A full day of micros stays far from overflow.
    const SimTime day = SimTime::from_seconds(86400);
    CHECK(day.micros == 86'400'000'000);
    CHECK((day + Duration::from_seconds(1)).micros > day.micros);
}
