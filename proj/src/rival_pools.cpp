#include "slidecard/rival_pools.hpp"

#include <atomic>
#include <string>

#include "slidecard/errors.hpp"
#include "slidecard/parallel.hpp"

namespace slidecard {

namespace {

std::size_t pool_cells(unsigned c, std::uint32_t k) {
  if (c > AtPool::kMaxLog2Cells) throw ConfigError("c must be at most 32, got " + std::to_string(c));
  const std::uint64_t n = std::uint64_t{1} << c;
  if (n < 2ull * k) {
    throw ConfigError("pool of 2^" + std::to_string(c) + " cells is smaller than 2k");
  }
  return n;
}

void require_index(std::size_t i, std::size_t n) {
  if (i >= n) throw ContractViolation("cell index " + std::to_string(i) + " out of range");
}

void require_width(std::uint32_t k_prime, std::uint32_t k) {
  if (k_prime < 1 || k_prime > k) throw ContractViolation("window width k' out of range");
}

}  // namespace

DrPool::DrPool(unsigned c, std::uint32_t k)
    : c_(c), counter_(k), cells_(pool_cells(c, k), counter_.width(), counter_.init().raw) {}

DrValue DrPool::value(std::size_t i) const {
  require_index(i, size());
  return {cells_.load(i)};
}

void DrPool::set(std::size_t i) {
  require_index(i, size());
  if (cells_.load(i) != 0) cells_.store(i, 0);
}

bool DrPool::check(std::size_t i, std::uint32_t k_prime) const {
  require_index(i, size());
  return counter_.check({cells_.load(i)}, k_prime);
}

std::uint64_t DrPool::inactive_count(std::uint32_t k_prime, unsigned workers) const {
  require_width(k_prime, k());
  std::atomic<std::uint64_t> total{0};
  parallel_ranges(size(), workers, [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    for (std::size_t i = begin; i < end; ++i) local += cells_.load(i) >= k_prime;
    total.fetch_add(local, std::memory_order_relaxed);
  }, 1 << 16);
  return total.load();
}

MaintenanceReport DrPool::advance(unsigned workers) {
  MaintenanceReport report;
  report.cells_maintained = size();
  const std::uint32_t k_value = k();
  std::atomic<std::uint64_t> cleared{0};
  parallel_ranges(size(), workers, [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const DrValue before{cells_.load(i)};
      const DrValue after = counter_.slide(before);
      if (after != before) {
        cells_.store(i, after.raw);
        local += after.raw == k_value;
      }
    }
    cleared.fetch_add(local, std::memory_order_relaxed);
  }, 1 << 16);
  report.cells_cleared = cleared.load();
  return report;
}

TsPool::TsPool(unsigned c, std::uint32_t k)
    : c_(c), k_(k), cells_(pool_cells(c, k), TsValue::kNever) {
  WindowConfig{k, 1}.validate();
}

TsValue TsPool::value(std::size_t i) const {
  require_index(i, size());
  return {cells_[i]};
}

void TsPool::set(std::size_t i) {
  require_index(i, size());
  std::atomic_ref<std::uint64_t>(cells_[i]).store(slice_, std::memory_order_relaxed);
}

bool TsPool::check(std::size_t i, std::uint32_t k_prime) const {
  require_index(i, size());
  require_width(k_prime, k_);
  return ts_check({cells_[i]}, slice_, k_prime);
}

std::uint64_t TsPool::inactive_count(std::uint32_t k_prime, unsigned workers) const {
  require_width(k_prime, k_);
  std::atomic<std::uint64_t> total{0};
  parallel_ranges(size(), workers, [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    for (std::size_t i = begin; i < end; ++i) local += !ts_check({cells_[i]}, slice_, k_prime);
    total.fetch_add(local, std::memory_order_relaxed);
  }, 1 << 16);
  return total.load();
}

MaintenanceReport TsPool::advance(unsigned) {
  ++slice_;
  return {};
}

}  // namespace slidecard
