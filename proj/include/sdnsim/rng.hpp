#pragma once

#include <cstdint>
#include <random>

namespace sdnsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seeded generator with a portable bounded draw. std::uniform_int_distribution
// is implementation-defined, so reports produced through it would differ
// between standard libraries; the multiply-shift reduction below does not.
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform draw in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    bool coin() { return (next_u64() & 1) != 0; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace sdnsim
