#pragma once

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <span>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "slidecard/at_pool.hpp"
#include "slidecard/errors.hpp"
#include "slidecard/hashing.hpp"
#include "slidecard/parallel.hpp"
#include "slidecard/rival_pools.hpp"

namespace slidecard {

enum class CounterKind : std::uint8_t { At, Dr, Ts };

std::string_view to_string(CounterKind kind) noexcept;

struct EstimatorConfig {
  unsigned c = 20;          // pool holds 2^c counters
  std::uint32_t g = 1024;   // virtual counters per host
  std::uint32_t k = 10;     // max window width in slices
  std::uint64_t seed = 1;
  Partition partition = Partition::TailRemainder;  // AT pools only

  void validate() const;
};

struct EstimateReport {
  std::uint32_t host = 0;
  std::uint64_t window_end = 0;  // slice index the window ends at
  std::uint32_t k_prime = 1;
  double estimate = 0.0;
  double z_v = 1.0;  // inactive fraction of the host's virtual counters
  double z_p = 1.0;  // inactive fraction of the whole pool
  bool saturated = false;

  friend bool operator==(const EstimateReport&, const EstimateReport&) = default;
};

struct ClampedEstimate {
  double value = 0.0;
  bool saturated = false;
};

// Shared-pool estimate g * (ln z_p - ln z_v). Zero fractions are clamped to
// half a counter (1/(2g) and 1/(2 * pool_size)); negative results floor at 0.
ClampedEstimate estimate_from_fractions(double z_v, double z_p, std::uint32_t g,
                                        std::size_t pool_size);

// Plain linear counting, -g * ln(zeros / g), zeros clamped to at least 1.
ClampedEstimate estimate_linear(std::uint32_t g, std::uint32_t zeros);

// g virtual counters per host, mapped by hashing into one shared pool of
// AT, DR or TS counters. The estimate only depends on which counters are
// active, so all three pool kinds give identical reports for the same input.
template <class Pool>
class VirtualEstimator {
 public:
  explicit VirtualEstimator(const EstimatorConfig& config)
      : config_(validated(config)), hash_(config.seed, config.c, config.g), pool_(make_pool(config)) {
    if (pool_.size() < config.g) throw ConfigError("g must not exceed the pool size 2^c");
  }

  // Resumes over an existing pool (AT snapshots).
  VirtualEstimator(const EstimatorConfig& config, Pool pool)
      : config_(validated(config)), hash_(config.seed, config.c, config.g), pool_(std::move(pool)) {
    if (pool_.log2_cells() != config.c || pool_.k() != config.k) {
      throw ConfigError("pool geometry does not match the estimator configuration");
    }
  }

  const EstimatorConfig& config() const noexcept { return config_; }
  const HashFamily& hash() const noexcept { return hash_; }
  const Pool& pool() const noexcept { return pool_; }
  Pool& pool() noexcept { return pool_; }
  std::uint64_t current_slice() const noexcept { return slice_; }

  std::uint64_t cell_for(std::uint32_t aip, std::uint32_t bip) const noexcept {
    return hash_.cell(aip, hash_.virtual_index(bip));
  }

  // Scan phase; safe to call concurrently.
  void record(std::uint32_t aip, std::uint32_t bip) { pool_.set(cell_for(aip, bip)); }

  // Estimate phase.
  double pool_inactive_fraction(std::uint32_t k_prime, unsigned workers = 1) const {
    return static_cast<double>(pool_.inactive_count(k_prime, workers)) /
           static_cast<double>(pool_.size());
  }

  std::uint32_t inactive_virtual(std::uint32_t aip, std::uint32_t k_prime) const {
    if (k_prime < 1 || k_prime > config_.k) throw ContractViolation("window width k' out of range");
    constexpr std::uint32_t kBatch = 32;
    std::array<std::uint64_t, kBatch> cells;
    std::uint32_t inactive = 0;
    for (std::uint32_t base = 0; base < config_.g; base += kBatch) {
      const std::uint32_t n = std::min(kBatch, config_.g - base);
      for (std::uint32_t j = 0; j < n; ++j) {
        cells[j] = hash_.cell(aip, base + j);
        pool_.prefetch(cells[j]);
      }
      for (std::uint32_t j = 0; j < n; ++j) inactive += !pool_.active(cells[j], k_prime);
    }
    return inactive;
  }

  EstimateReport estimate(std::uint32_t aip, std::uint32_t k_prime, double z_p) const {
    if (k_prime < 1 || k_prime > config_.k) throw ContractViolation("window width k' out of range");
    EstimateReport r;
    r.host = aip;
    r.window_end = slice_;
    r.k_prime = k_prime;
    r.z_v = static_cast<double>(inactive_virtual(aip, k_prime)) / config_.g;
    r.z_p = z_p;
    const ClampedEstimate e = estimate_from_fractions(r.z_v, z_p, config_.g, pool_.size());
    r.estimate = e.value;
    r.saturated = e.saturated;
    return r;
  }

  // One report per host, in the order given; z_p is computed once.
  std::vector<EstimateReport> estimate_all(std::span<const std::uint32_t> hosts,
                                           std::uint32_t k_prime, unsigned workers = 1) const {
    std::vector<EstimateReport> out(hosts.size());
    if (hosts.empty()) return out;
    const double z_p = pool_inactive_fraction(k_prime, workers);
    parallel_ranges(hosts.size(), workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t h = begin; h < end; ++h) out[h] = estimate(hosts[h], k_prime, z_p);
    }, 8);
    return out;
  }

  // Closes the current slice.
  MaintenanceReport advance(unsigned workers = 1) {
    ++slice_;
    return pool_.advance(workers);
  }

 private:
  static EstimatorConfig validated(const EstimatorConfig& config) {
    config.validate();
    return config;
  }

  static Pool make_pool(const EstimatorConfig& config) {
    if constexpr (std::is_same_v<Pool, AtPool>) {
      return AtPool(config.c, config.k, config.partition);
    } else {
      return Pool(config.c, config.k);
    }
  }

  EstimatorConfig config_;
  HashFamily hash_;
  Pool pool_;
  std::uint64_t slice_ = 0;
};

using VateEstimator = VirtualEstimator<AtPool>;
using VdreEstimator = VirtualEstimator<DrPool>;
using VtseEstimator = VirtualEstimator<TsPool>;
using AnyEstimator = std::variant<VateEstimator, VdreEstimator, VtseEstimator>;

AnyEstimator make_estimator(CounterKind kind, const EstimatorConfig& config);

// Hosts seen recently, keyed by last slice of activity. Insertions from scan
// workers go through observe(), which takes a lock once per call.
class HostRegistry {
 public:
  void observe(std::span<const std::uint32_t> hosts, std::uint64_t slice);
  void observe(std::uint32_t host, std::uint64_t slice);

  // Sorted hosts seen within the last k_prime slices ending at `slice`.
  std::vector<std::uint32_t> active(std::uint64_t slice, std::uint32_t k_prime) const;

  // Drops hosts not seen within the last k slices ending at `slice`.
  void expire(std::uint64_t slice, std::uint32_t k);

  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::uint32_t, std::uint64_t> last_seen_;
};

}  // namespace slidecard
