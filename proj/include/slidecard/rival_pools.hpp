#pragma once

// Pools of the comparison counters, with the same surface as AtPool so the
// virtual estimator can run over any of them.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "slidecard/at_pool.hpp"
#include "slidecard/counter.hpp"
#include "slidecard/packed_array.hpp"

namespace slidecard {

// 2^c distance recorders; every cell slides on every advance.
class DrPool {
 public:
  DrPool(unsigned c, std::uint32_t k);

  unsigned log2_cells() const noexcept { return c_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::uint32_t k() const noexcept { return counter_.k(); }
  unsigned bits_per_counter() const noexcept { return counter_.width(); }

  DrValue value(std::size_t i) const;
  void set(std::size_t i);
  bool check(std::size_t i, std::uint32_t k_prime) const;
  bool active(std::size_t i, std::uint32_t k_prime) const noexcept { return cells_.load(i) < k_prime; }
  void prefetch(std::size_t i) const noexcept { cells_.prefetch(i); }
  std::uint64_t inactive_count(std::uint32_t k_prime, unsigned workers = 1) const;
  MaintenanceReport advance(unsigned workers = 1);

  std::size_t memory_bytes() const noexcept { return cells_.memory_bytes(); }

 private:
  unsigned c_;
  DrCounter counter_;
  PackedArray cells_;
};

// 2^c last-seen slice indices; advance only moves the clock.
class TsPool {
 public:
  TsPool(unsigned c, std::uint32_t k);

  unsigned log2_cells() const noexcept { return c_; }
  std::size_t size() const noexcept { return cells_.size(); }
  std::uint32_t k() const noexcept { return k_; }
  unsigned bits_per_counter() const noexcept { return 64; }
  std::uint64_t current_slice() const noexcept { return slice_; }

  TsValue value(std::size_t i) const;
  void set(std::size_t i);
  bool check(std::size_t i, std::uint32_t k_prime) const;
  void prefetch(std::size_t i) const noexcept { __builtin_prefetch(&cells_[i]); }
  bool active(std::size_t i, std::uint32_t k_prime) const noexcept {
    const std::uint64_t last = cells_[i];
    return last != TsValue::kNever && last <= slice_ && slice_ - last < k_prime;
  }
  std::uint64_t inactive_count(std::uint32_t k_prime, unsigned workers = 1) const;
  MaintenanceReport advance(unsigned workers = 1);

  std::size_t memory_bytes() const noexcept { return cells_.size() * sizeof(std::uint64_t); }

 private:
  unsigned c_;
  std::uint32_t k_;
  std::uint64_t slice_ = 0;
  std::vector<std::uint64_t> cells_;
};

}  // namespace slidecard
