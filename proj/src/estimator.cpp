#include "slidecard/estimator.hpp"

#include <algorithm>
#include <string>

namespace slidecard {

std::string_view to_string(CounterKind kind) noexcept {
  switch (kind) {
    case CounterKind::At: return "at";
    case CounterKind::Dr: return "dr";
    case CounterKind::Ts: return "ts";
  }
  return "?";
}

void EstimatorConfig::validate() const {
  WindowConfig{k, 1}.validate();
  if (c > AtPool::kMaxLog2Cells) throw ConfigError("c must be at most 32, got " + std::to_string(c));
  if (g < 1) throw ConfigError("g must be positive");
  if (g > (std::uint64_t{1} << c)) throw ConfigError("g must not exceed the pool size 2^c");
}

ClampedEstimate estimate_from_fractions(double z_v, double z_p, std::uint32_t g,
                                        std::size_t pool_size) {
  ClampedEstimate out;
  const double min_v = 1.0 / (2.0 * g);
  const double min_p = 1.0 / (2.0 * static_cast<double>(pool_size));
  if (z_v < min_v) {
    z_v = min_v;
    out.saturated = true;
  }
  if (z_p < min_p) {
    z_p = min_p;
    out.saturated = true;
  }
  out.value = g * (std::log(z_p) - std::log(z_v));
  if (out.value < 0.0) {
    out.value = 0.0;
    out.saturated = true;
  }
  return out;
}

ClampedEstimate estimate_linear(std::uint32_t g, std::uint32_t zeros) {
  if (g == 0 || zeros > g) throw ContractViolation("zero-counter count must be in [0, g]");
  ClampedEstimate out;
  if (zeros == 0) {
    zeros = 1;
    out.saturated = true;
  }
  out.value = -static_cast<double>(g) * std::log(static_cast<double>(zeros) / g);
  return out;
}

AnyEstimator make_estimator(CounterKind kind, const EstimatorConfig& config) {
  switch (kind) {
    case CounterKind::Dr: return AnyEstimator(std::in_place_type<VdreEstimator>, config);
    case CounterKind::Ts: return AnyEstimator(std::in_place_type<VtseEstimator>, config);
    case CounterKind::At: break;
  }
  return AnyEstimator(std::in_place_type<VateEstimator>, config);
}

void HostRegistry::observe(std::span<const std::uint32_t> hosts, std::uint64_t slice) {
  std::lock_guard lock(mutex_);
  for (std::uint32_t h : hosts) {
    auto [it, inserted] = last_seen_.try_emplace(h, slice);
    if (!inserted && it->second < slice) it->second = slice;
  }
}

void HostRegistry::observe(std::uint32_t host, std::uint64_t slice) {
  observe(std::span<const std::uint32_t>(&host, 1), slice);
}

std::vector<std::uint32_t> HostRegistry::active(std::uint64_t slice, std::uint32_t k_prime) const {
  std::vector<std::uint32_t> out;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [host, last] : last_seen_) {
      if (last <= slice && slice - last < k_prime) out.push_back(host);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void HostRegistry::expire(std::uint64_t slice, std::uint32_t k) {
  std::lock_guard lock(mutex_);
  std::erase_if(last_seen_, [&](const auto& entry) { return entry.second <= slice && slice - entry.second >= k; });
}

std::size_t HostRegistry::size() const {
  std::lock_guard lock(mutex_);
  return last_seen_.size();
}

}  // namespace slidecard
