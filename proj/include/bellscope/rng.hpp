// Counter-based random number generation (Philox4x32-10).
//
// Every draw is a pure function of (seed, stream, counter), so trial i of
// stream p can be generated by any thread, in any order, and the result is
// bit-identical to a serial pass. This is what makes the Monte Carlo layer
// reproducible independent of the degree of parallelism.

#pragma once

#include <array>
#include <cstdint>

namespace bellscope {

// Philox4x32 with 10 rounds, after Salmon et al.'s Random123 generator.
// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
struct Philox4x32 {
    static constexpr std::uint32_t kMult0 = 0xD2511F53u;
    static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

// 64 pseudo-random bits for the given (seed, stream, counter) triple.
inline std::uint64_t keyed_bits(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t counter) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = Philox4x32::block(ctr, key);
    return std::uint64_t(out[0]) | (std::uint64_t(out[1]) << 32);
}

// Uniform double in [0, 1) with 53-bit resolution.
inline double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double keyed_uniform(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t counter) {
    return to_unit_interval(keyed_bits(seed, stream, counter));
}

// Sequential convenience wrapper over the keyed generator, for test
// generators and random model draws.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t bits() { return keyed_bits(seed_, stream_, next_++); }
    double uniform() { return to_unit_interval(bits()); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return bits() % n; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t next_ = 0;
};

}  // namespace bellscope
