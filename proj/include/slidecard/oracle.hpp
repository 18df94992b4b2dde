#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <span>
#include <unordered_map>
#include <unordered_set>

namespace slidecard {

// Exact sliding-window distinct counts. Keeps one aip -> {bip} map per slice
// for the last k slices.
class SliceSetStore {
 public:
  explicit SliceSetStore(std::uint32_t k);

  std::uint32_t k() const noexcept { return k_; }
  std::uint64_t current_slice() const noexcept { return current_; }

  // Moves the clock to `slice`, evicting slices that fell out of the k window.
  void advance_to(std::uint64_t slice);

  // Records (aip, bip) in slice t; t must not precede the current slice.
  void record(std::uint32_t aip, std::uint32_t bip, std::uint64_t t);

  // Distinct bips of aip over slices t-k'+1 .. t, where t is the current slice.
  std::uint64_t cardinality(std::uint32_t aip, std::uint32_t k_prime) const;

  // Every host with at least one bip in the window, with its cardinality.
  std::map<std::uint32_t, std::uint64_t> cardinalities(std::uint32_t k_prime) const;

 private:
  using SliceSets = std::unordered_map<std::uint32_t, std::unordered_set<std::uint32_t>>;

  void require_width(std::uint32_t k_prime) const;

  std::uint32_t k_;
  std::uint64_t current_ = 0;
  std::deque<SliceSets> slices_;  // back() is the current slice
};

// True iff some slice in `history` lies in [t-k'+1, t].
bool counter_active(std::span<const std::uint64_t> history, std::uint64_t t, std::uint32_t k_prime);

}  // namespace slidecard
