#pragma once

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11).  Splittable and
// order-independent: every draw is a pure function of (seed, index, stream), so
// fields built from it are reproducible across runs and languages.

#include <array>
#include <cstdint>
#include <utility>

namespace jinxin {

namespace detail {

inline constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
inline constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = std::uint64_t(a) * std::uint64_t(b);
    hi = std::uint32_t(p >> 32);
    lo = std::uint32_t(p);
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    using namespace detail;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM4x32A, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM4x32B, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kPhiloxW32A;
        key[1] += kPhiloxW32B;
    }
    return ctr;
}

// two independent U[0,1) doubles (53-bit) from one Philox block
inline std::pair<double, double> philox_unit_pair(std::uint64_t seed, std::uint64_t index,
                                                  std::uint32_t stream) {
    auto r = philox4x32({std::uint32_t(index), std::uint32_t(index >> 32), stream, 0x4a584a58u},
                        {std::uint32_t(seed), std::uint32_t(seed >> 32)});
    auto unit = [](std::uint32_t hi, std::uint32_t lo) {
        std::uint64_t u = (std::uint64_t(hi) << 32) | lo;
        return double(u >> 11) * 0x1.0p-53;
    };
    return {unit(r[0], r[1]), unit(r[2], r[3])};
}

// two independent U[-1,1) doubles
inline std::pair<double, double> philox_pm1_pair(std::uint64_t seed, std::uint64_t index,
                                                 std::uint32_t stream) {
    auto [a, b] = philox_unit_pair(seed, index, stream);
    return {2.0 * a - 1.0, 2.0 * b - 1.0};
}

}  // namespace jinxin
