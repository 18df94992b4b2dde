#pragma once

#include <cstddef>
#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "slidecard/counter.hpp"
#include "slidecard/packed_array.hpp"

namespace slidecard {

// How the 2^c cells are split into 2k blocks.
enum class Partition : std::uint8_t {
  TailRemainder = 0,  // 2k-1 blocks of a cells, remainder in the last block
  LowDeviation = 1,   // block sizes differ by at most one
};

std::string_view to_string(Partition p) noexcept;

// What one slice advance did. `blocks` lists the maintained block indices.
struct MaintenanceReport {
  std::vector<std::uint32_t> blocks;
  std::uint64_t cells_maintained = 0;
  std::uint64_t cells_cleared = 0;
};

// Pool of 2^c asynchronous timestamps sharing one stored clock.
//
// Block i runs act (bact0 + i) mod 2k, so at any slice exactly two blocks sit
// at act 0 or k and need maintenance. Per-slice protocol:
//   1. scan:     set() from any number of threads
//   2. estimate: check() / inactive_count(), read-only
//   3. advance(): bumps bact0 and maintains the two due blocks
// Phases must not overlap.
class AtPool {
 public:
  static constexpr unsigned kMaxLog2Cells = 32;
  static constexpr std::size_t kSnapshotHeaderBytes = 16;

  AtPool(unsigned c, std::uint32_t k, Partition partition = Partition::TailRemainder);

  unsigned log2_cells() const noexcept { return c_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::uint32_t k() const noexcept { return counter_.k(); }
  Partition partition() const noexcept { return partition_; }
  const AtCounter& counter() const noexcept { return counter_; }
  unsigned bits_per_counter() const noexcept { return counter_.width(); }
  std::uint32_t block_count() const noexcept { return 2 * k(); }

  // a, b (tail remainder) and a', b' (low deviation).
  std::uint64_t tail_block_size() const noexcept { return a_; }
  std::uint64_t tail_remainder() const noexcept { return b_; }
  std::uint64_t even_block_size() const noexcept { return a2_; }
  std::uint64_t even_remainder() const noexcept { return b2_; }

  Act bact0() const noexcept { return bact0_; }

  std::uint32_t block_of(std::size_t i) const;
  Act block_act(std::uint32_t block) const;
  std::size_t block_begin(std::uint32_t block) const noexcept;
  std::size_t block_size(std::uint32_t block) const noexcept {
    return block_begin(block + 1) - block_begin(block);
  }
  std::size_t max_block_size() const noexcept;

  AtValue value(std::size_t i) const;
  void set(std::size_t i);
  bool check(std::size_t i, std::uint32_t k_prime) const;

  // check() without argument validation; i < size(), 1 <= k_prime <= k.
  bool active(std::size_t i, std::uint32_t k_prime) const noexcept {
    const std::uint32_t v = cells_.load(i);
    const std::uint32_t two_k = block_count();
    if (v == two_k) return false;
    std::uint32_t act = bact0_.raw + block_of_unchecked(i);
    if (act >= two_k) act -= two_k;
    const std::uint32_t distance = act >= v ? act - v : act + two_k - v;
    return distance < k_prime;
  }

  std::uint64_t inactive_count(std::uint32_t k_prime, unsigned workers = 1) const;
  double inactive_fraction(std::uint32_t k_prime, unsigned workers = 1) const;

  MaintenanceReport advance(unsigned workers = 1);

  void prefetch(std::size_t i) const noexcept { cells_.prefetch(i); }
  std::size_t memory_bytes() const noexcept { return cells_.memory_bytes(); }
  const PackedArray& cells() const noexcept { return cells_; }

  // Flat snapshot: "ATP1", u8 c, u8 partition, u16 zero, u32 k, u32 bact0,
  // then the packed words as little-endian u64.
  void save(std::ostream& out) const;
  static AtPool load(std::istream& in);

  friend bool operator==(const AtPool&, const AtPool&) = default;

 private:
  // Cell indices and block sizes fit in 32 bits since c <= 32.
  std::uint32_t block_of_unchecked(std::size_t i) const noexcept {
    const auto x = static_cast<std::uint32_t>(i);
    const std::uint32_t last = block_count() - 1;
    if (partition_ == Partition::TailRemainder) return std::min(x / static_cast<std::uint32_t>(a_), last);
    const std::uint64_t two_k = block_count();
    if (i < a2_ * (two_k - b2_ + 1)) return std::min(x / static_cast<std::uint32_t>(a2_), last);
    return static_cast<std::uint32_t>((i + two_k - b2_) / (a2_ + 1));
  }

  std::uint64_t count_inactive(std::size_t begin, std::size_t end, std::uint32_t k_prime) const noexcept;

  unsigned c_;
  AtCounter counter_;
  Partition partition_;
  std::uint64_t a_ = 0, b_ = 0, a2_ = 0, b2_ = 0;
  Act bact0_{0};
  PackedArray cells_;
};

}  // namespace slidecard
