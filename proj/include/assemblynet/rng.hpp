#pragma once

#include <cstdint>
#include <random>

namespace assemblynet {

std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent stream seed from (seed, tag). Used to give the
/// simulator's subsystems separate generators so inserting or skipping
/// draws in one stream cannot perturb another.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t tag);

/// Unbiased draw in [0, n). Uses raw mt19937_64 output with rejection
/// sampling; std::uniform_int_distribution is not portable across
/// standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

}  // namespace assemblynet
