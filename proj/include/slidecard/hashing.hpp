#pragma once

#include <cstdint>

namespace slidecard {

// 64-bit finalizer with full avalanche (splitmix64 constants).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Seeded hashes placing a host's virtual counters in the pool.
//   cell(aip, i)       -> [0, 2^c)   physical cell of virtual counter i
//   virtual_index(bip) -> [0, g)     which of the g counters an opposite host sets
// The two functions use independent seeds derived from the one user seed.
class HashFamily {
 public:
  HashFamily(std::uint64_t seed, unsigned c, std::uint32_t g) noexcept
      : cell_seed_(mix64(seed ^ 0x243f6a8885a308d3ULL)),
        index_seed_(mix64(seed ^ 0x13198a2e03707344ULL)),
        c_(c),
        g_(g) {}

  std::uint64_t cell(std::uint32_t aip, std::uint32_t index) const noexcept {
    const std::uint64_t key = (std::uint64_t{aip} << 32) | index;
    const std::uint64_t h = mix64(mix64(key) ^ cell_seed_);
    return c_ == 0 ? 0 : h >> (64 - c_);
  }

  std::uint32_t virtual_index(std::uint32_t bip) const noexcept {
    const std::uint64_t h = mix64(mix64(bip) ^ index_seed_);
    return static_cast<std::uint32_t>(((h >> 32) * g_) >> 32);
  }

  unsigned log2_cells() const noexcept { return c_; }
  std::uint32_t g() const noexcept { return g_; }

 private:
  std::uint64_t cell_seed_;
  std::uint64_t index_seed_;
  unsigned c_;
  std::uint32_t g_;
};

}  // namespace slidecard
