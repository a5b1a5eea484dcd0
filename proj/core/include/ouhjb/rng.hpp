#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ouhjb {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Philox4x32-10 block function.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

/// Random stream addressed by (seed, stream_id). Draw number k is a pure
/// function of (seed, stream_id, k), so streams may be generated in any order
/// or on any thread.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

    /// Four uniform 32-bit words for block `step`.
    std::array<std::uint32_t, 4> block(std::uint64_t step) const {
        return philox4x32({static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(step >> 32),
                           static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                          {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    }

    /// Two independent standard normals for block `step` (Box-Muller).
    std::array<double, 2> normals(std::uint64_t step) const {
        const auto w = block(step);
        const double u1 = to_open_unit(w[0], w[1]);
        const double u2 = to_open_unit(w[2], w[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// Uniform on (0, 1) for block `step`.
    double uniform(std::uint64_t step) const {
        const auto w = block(step);
        return to_open_unit(w[0], w[1]);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_; }

    /// Seed for an independent family of streams, e.g. the inner paths of one
    /// outer replication.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
        return splitmix64(seed ^ splitmix64(tag + 0x632BE59BD9B4E019ull));
    }

  private:
    // 53 random bits mapped to the open interval (0, 1).
    static double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32 | lo) >> 11);
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace ouhjb
