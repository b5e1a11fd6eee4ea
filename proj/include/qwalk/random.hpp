#pragma once

#include <cstdint>
#include <initializer_list>

namespace qwalk {

// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Child seed for replicate/cell `index`. For a fixed parent, distinct indices
// always give distinct seeds.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

// Counter-based uniform draw in [0, 1). The value depends only on the seed and
// the key, never on how many draws happened before, so angle fields can be
// filled in any order or in parallel.
double keyed_uniform(std::uint64_t seed, std::initializer_list<std::uint64_t> key) noexcept;

}  // namespace qwalk
