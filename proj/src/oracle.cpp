#include "slidecard/oracle.hpp"

#include <algorithm>
#include <string>

#include "slidecard/counter.hpp"
#include "slidecard/errors.hpp"

namespace slidecard {

SliceSetStore::SliceSetStore(std::uint32_t k) : k_(k) {
  WindowConfig{k, 1}.validate();
  slices_.emplace_back();
}

void SliceSetStore::require_width(std::uint32_t k_prime) const {
  if (k_prime < 1 || k_prime > k_) {
    throw ContractViolation("window width k' = " + std::to_string(k_prime) + " outside [1, " +
                            std::to_string(k_) + "]");
  }
}

void SliceSetStore::advance_to(std::uint64_t slice) {
  if (slice < current_) throw ContractViolation("oracle cannot move back in time");
  if (slice - current_ >= k_) {
    slices_.clear();
    slices_.emplace_back();
  } else {
    for (std::uint64_t t = current_; t < slice; ++t) {
      slices_.emplace_back();
      if (slices_.size() > k_) slices_.pop_front();
    }
  }
  current_ = slice;
}

void SliceSetStore::record(std::uint32_t aip, std::uint32_t bip, std::uint64_t t) {
  advance_to(t);
  slices_.back()[aip].insert(bip);
}

std::uint64_t SliceSetStore::cardinality(std::uint32_t aip, std::uint32_t k_prime) const {
  require_width(k_prime);
  std::unordered_set<std::uint32_t> seen;
  const std::size_t n = std::min<std::size_t>(k_prime, slices_.size());
  for (std::size_t j = 0; j < n; ++j) {
    const SliceSets& s = slices_[slices_.size() - 1 - j];
    if (auto it = s.find(aip); it != s.end()) seen.insert(it->second.begin(), it->second.end());
  }
  return seen.size();
}

std::map<std::uint32_t, std::uint64_t> SliceSetStore::cardinalities(std::uint32_t k_prime) const {
  require_width(k_prime);
  std::unordered_map<std::uint32_t, std::unordered_set<std::uint32_t>> merged;
  const std::size_t n = std::min<std::size_t>(k_prime, slices_.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [aip, bips] : slices_[slices_.size() - 1 - j]) {
      merged[aip].insert(bips.begin(), bips.end());
    }
  }
  std::map<std::uint32_t, std::uint64_t> out;
  for (const auto& [aip, bips] : merged) out.emplace(aip, bips.size());
  return out;
}

bool counter_active(std::span<const std::uint64_t> history, std::uint64_t t, std::uint32_t k_prime) {
  for (std::uint64_t s : history) {
    if (s <= t && t - s < k_prime) return true;
  }
  return false;
}

}  // namespace slidecard
