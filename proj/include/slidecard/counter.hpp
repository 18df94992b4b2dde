#pragma once

// Sliding-window activity counters.
//
// Three counter families answer the same question ("was this counter set
// within the last k' slices?") with different storage/maintenance trade-offs:
//
//   AT  asynchronous timestamp, ceil(log2(2k+1)) bits, needs maintenance only
//       when its derived clock (act) reaches 0 or k, i.e. twice per 2k slices.
//   DR  distance recorder, ceil(log2(k+1)) bits, incremented every slice.
//   TS  full 64-bit slice index of the last set, no maintenance at all.
//
// The functions here are pure value transformations. Storage lives in the
// pools (at_pool.hpp, rival_pools.hpp).

#include <bit>
#include <compare>
#include <cstdint>
#include <limits>

namespace slidecard {

inline constexpr std::uint32_t kMaxWindowSlices = 1u << 15;

struct WindowConfig {
  std::uint32_t k = 1;                  // max slices per window
  std::uint64_t slice_duration_us = 1;  // slice length

  void validate() const;
  void validate_width(std::uint32_t k_prime) const;
};

// Bits needed to store every integer in [0, max_value].
constexpr unsigned bits_for(std::uint64_t max_value) noexcept {
  return max_value == 0 ? 1u : static_cast<unsigned>(std::bit_width(max_value));
}

constexpr unsigned at_width(std::uint32_t k) noexcept { return bits_for(2ull * k); }
constexpr unsigned dr_width(std::uint32_t k) noexcept { return bits_for(k); }

// Stored AT value: an act in [0, 2k-1], or 2k for "inactive".
struct AtValue {
  std::uint32_t raw = 0;
  friend constexpr auto operator<=>(AtValue, AtValue) = default;
};

// Asynchronous current timestamp; derived from the slice, never stored per cell.
struct Act {
  std::uint32_t raw = 0;
  friend constexpr auto operator<=>(Act, Act) = default;
};

class AtCounter {
 public:
  explicit AtCounter(std::uint32_t k);

  std::uint32_t k() const noexcept { return k_; }
  unsigned width() const noexcept { return at_width(k_); }
  AtValue inactive() const noexcept { return {2 * k_}; }
  bool is_inactive(AtValue v) const noexcept { return v.raw == 2 * k_; }

  // act of the following slice
  Act next(Act act) const noexcept { return {(act.raw + 1) % (2 * k_)}; }

  AtValue init() const noexcept { return inactive(); }
  AtValue set(AtValue current, Act act) const;

  // Slices since the last set, modulo 2k. Undefined for the sentinel.
  std::uint32_t distance(AtValue v, Act act) const;

  // Active in the window of the last k_prime slices ending at this slice.
  bool check(AtValue v, Act act, std::uint32_t k_prime) const;

  // Slice-start maintenance valid for any act: clears counters whose distance
  // has reached k. Runs before any set in the slice, so a stored value equal
  // to act is a full 2k cycle old, not a fresh set.
  AtValue preserve_general(AtValue v, Act act) const noexcept;

  // Comparison-only maintenance for act in {0, k}; no-op for any other act.
  AtValue preserve_fast(AtValue v, Act act) const noexcept {
    if (act.raw == 0) {
      if (v.raw <= k_) return inactive();
    } else if (act.raw == k_) {
      if ((v.raw >= k_ && v.raw < 2 * k_) || v.raw == 0) return inactive();
    }
    return v;
  }

  bool needs_maintenance(Act act) const noexcept { return act.raw == 0 || act.raw == k_; }

  friend bool operator==(const AtCounter&, const AtCounter&) = default;

 private:
  void require_act(Act act) const;

  std::uint32_t k_;
};

// Distance recorder. Inactive is exactly k; increments saturate there.
struct DrValue {
  std::uint32_t raw = 0;
  friend constexpr auto operator<=>(DrValue, DrValue) = default;
};

class DrCounter {
 public:
  explicit DrCounter(std::uint32_t k);

  std::uint32_t k() const noexcept { return k_; }
  unsigned width() const noexcept { return dr_width(k_); }

  DrValue init() const noexcept { return {k_}; }
  DrValue set(DrValue) const noexcept { return {0}; }
  DrValue slide(DrValue v) const noexcept { return {v.raw < k_ ? v.raw + 1 : k_}; }
  bool check(DrValue v, std::uint32_t k_prime) const;

 private:
  std::uint32_t k_;
};

// Last-seen slice index.
struct TsValue {
  static constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t last_seen = kNever;

  bool ever_set() const noexcept { return last_seen != kNever; }
  friend constexpr auto operator<=>(TsValue, TsValue) = default;
};

TsValue ts_set(TsValue current, std::uint64_t slice);
bool ts_check(TsValue v, std::uint64_t slice, std::uint32_t k_prime);

}  // namespace slidecard
