#pragma once

// The CLI commands as library functions over streams, so tests and the
// acceptance suite drive exactly what the binary runs.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slidecard/at_pool.hpp"
#include "slidecard/estimator.hpp"
#include "slidecard/synthetic.hpp"
#include "slidecard/trace.hpp"

namespace slidecard {

inline constexpr std::size_t kDefaultScanBatch = 1 << 15;
inline constexpr double kDefaultReportingFloor = 100.0;

struct RunConfig {
  TraceFormat format = TraceFormat::Text;
  unsigned c = 20;
  std::uint32_t g = 1024;
  std::uint32_t k = 10;
  std::uint32_t k_prime = 10;
  std::uint64_t slice_us = 1'000'000;
  std::uint64_t seed = 1;
  CounterKind counter = CounterKind::At;
  Partition partition = Partition::TailRemainder;
  std::optional<double> floor;  // unset: command default
  unsigned workers = 1;
  std::size_t scan_batch = kDefaultScanBatch;
  std::optional<std::string> checkpoint;  // AT pool snapshot written at the end
  std::optional<std::string> resume;      // AT pool snapshot loaded at the start

  EstimatorConfig estimator() const { return {c, g, k, seed, partition}; }
  // Checks every numeric parameter; throws ConfigError.
  void validate() const;
};

struct RunSummary {
  std::uint64_t slices = 0;
  std::uint64_t records = 0;
  std::uint64_t rows = 0;
};

// slice_end,aip,estimate,z_v,z_p,saturated
RunSummary run_estimate(const RunConfig& config, std::istream& trace, std::ostream& out);

// slice_end,aip,true_cardinality
RunSummary run_exact(const RunConfig& config, std::istream& trace, std::ostream& out);

// slice,ST_us,ET_us,PT_us,cells_maintained,cells_cleared
RunSummary run_bench(const RunConfig& config, std::istream& trace, std::ostream& out);

struct KindCost {
  CounterKind kind = CounterKind::At;
  std::uint64_t maintenance_ops = 0;
  unsigned bits_per_counter = 0;
};

struct CompareSummary {
  RunSummary run;
  std::uint64_t mismatch_rows = 0;
  std::vector<KindCost> costs;  // at, dr, ts
};

// slice_end,aip,at,dr,ts,mismatch then summary,kind,maintenance_ops,bits_per_counter
CompareSummary run_compare(const RunConfig& config, std::istream& trace, std::ostream& out);

struct GenSummary {
  std::uint64_t hosts = 0;
  std::uint64_t records = 0;
  std::uint64_t distinct_pairs = 0;
  std::uint64_t slices = 0;
};

GenSummary run_gen(const SyntheticSpec& spec, TraceFormat format, std::ostream& trace_out,
                   std::ostream& truth_out);

}  // namespace slidecard
