#include "sysrisk/rng.hpp"

#include <cmath>
#include <numbers>

namespace sysrisk {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline PhiloxKey key_of(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// (0, 1) from the top 53 bits; never returns 0 so the log below is finite.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Box-Muller on one Philox block: the pair for counter (pair, stream).
inline void normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t pair,
                        double& z0, double& z1) {
    const PhiloxCounter ctr = {static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32),
                               static_cast<std::uint32_t>(stream),
                               static_cast<std::uint32_t>(stream >> 32)};
    const PhiloxCounter r = philox4x32_10(ctr, key_of(seed));
    const double u1 = to_open_unit(r[0], r[1]);
    const double u2 = to_open_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z0 = radius * std::cos(angle);
    z1 = radius * std::sin(angle);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x5851F42D4C957F2Dull));
}

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    double z0, z1;
    normal_pair(seed, stream, index >> 1, z0, z1);
    return (index & 1u) ? z1 : z0;
}

void fill_normals(std::uint64_t seed, std::uint64_t stream, double scale, std::span<double> out) {
    const std::size_t n = out.size();
    std::size_t k = 0;
    for (; k + 1 < n; k += 2) {
        double z0, z1;
        normal_pair(seed, stream, k >> 1, z0, z1);
        out[k] = scale * z0;
        out[k + 1] = scale * z1;
    }
    if (k < n) {
        double z0, z1;
        normal_pair(seed, stream, k >> 1, z0, z1);
        out[k] = scale * z0;
    }
}

}  // namespace sysrisk
