#include "qwalk/random.hpp"

namespace qwalk {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) ^ mix64(index));
}

double keyed_uniform(std::uint64_t seed, std::initializer_list<std::uint64_t> key) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : key) h = mix64(h ^ mix64(k));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace qwalk
