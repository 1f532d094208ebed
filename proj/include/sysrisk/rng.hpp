#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace sysrisk {

/// Philox4x32-10 block: a keyed bijection on 128-bit counters.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for Monte Carlo path `index` under `master_seed`.
std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t index);

/// Standard normal number `index` of stream `stream` under `seed`. The value
/// depends only on (seed, stream, index).
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Fills `out` with `scale * Z_k`, k = 0..size-1, of stream `stream`.
/// Bit-identical to calling counter_normal element by element.
void fill_normals(std::uint64_t seed, std::uint64_t stream, double scale, std::span<double> out);

}  // namespace sysrisk
