#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "slidecard/trace.hpp"

namespace slidecard {

// One monitored host: `cardinality` distinct opposite hosts spread over the
// slices [first_slice, first_slice + span).
struct HostPlan {
  std::uint32_t aip = 0;
  std::uint32_t cardinality = 0;
  std::uint64_t first_slice = 0;
  std::uint32_t span = 1;
};

struct SyntheticSpec {
  std::vector<HostPlan> hosts;
  double repetition = 1.0;         // mean packets per distinct pair, >= 1
  std::uint32_t universe = 1 << 20;  // opposite hosts drawn from this many addresses
  std::uint64_t seed = 1;
  std::uint64_t slice_us = 1'000'000;
  std::uint64_t start_us = 1'508'731'200'000'000;  // must be a multiple of slice_us
  std::uint32_t k_prime = 1;       // window width of the ground truth

  void validate() const;
};

struct GroundTruthRow {
  std::uint32_t aip = 0;
  std::uint64_t window_end = 0;
  std::uint32_t k_prime = 1;
  std::uint64_t cardinality = 0;

  friend bool operator==(const GroundTruthRow&, const GroundTruthRow&) = default;
};

struct SyntheticTrace {
  std::vector<IpPairRecord> records;  // timestamp ordered
  std::vector<GroundTruthRow> truth;  // sorted by (window_end, aip); zero rows omitted
  std::uint64_t distinct_pairs = 0;
  std::uint64_t slices = 0;
};

// Deterministic for a given spec. Ground truth is derived from the generator's
// own placement bookkeeping, with slice indices relative to the first slice
// that holds a record (the same origin SliceStream uses).
SyntheticTrace generate_synthetic(const SyntheticSpec& spec);

// `count` hosts with cardinalities log-spaced over [lo, hi].
std::vector<HostPlan> log_spaced_plan(std::uint32_t count, std::uint32_t lo, std::uint32_t hi,
                                      std::uint32_t span, std::uint64_t first_slice = 0);

// Heavy-tailed plan: Pareto(alpha) cardinalities starting at lo, capped at hi.
std::vector<HostPlan> pareto_plan(std::uint32_t count, double alpha, std::uint32_t lo,
                                  std::uint32_t hi, std::uint32_t span, std::uint64_t seed);

// Address of the i-th planned host (10.0.0.0/8).
constexpr std::uint32_t planned_host(std::uint32_t i) noexcept { return 0x0A000001u + i; }

void write_ground_truth(std::ostream& out, std::span<const GroundTruthRow> rows);
std::vector<GroundTruthRow> read_ground_truth(std::istream& in);

}  // namespace slidecard
