// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when a
// required criterion fails; the throughput check is informational only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slidecard/commands.hpp"
#include "slidecard/counter.hpp"
#include "slidecard/oracle.hpp"
#include "slidecard/parallel.hpp"
#include "slidecard/rival_pools.hpp"

using namespace slidecard;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const Outcome& o, bool informational = false) {
  std::printf("criterion %d %-34s %s  %s\n", id, name.c_str(),
              o.pass ? "PASS" : (informational ? "FAIL (informational)" : "FAIL"), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass && !informational) ++g_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome counter_oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uint64_t mismatches = 0, checks = 0;
  for (std::uint32_t k = 1; k <= 8; ++k) {
    const AtCounter at(k);
    for (int seq = 0; seq < 200; ++seq) {
      const double p_set = std::uniform_real_distribution<double>(0.02, 0.7)(rng);
      Act act{std::uniform_int_distribution<std::uint32_t>(0, 2 * k - 1)(rng)};
      AtValue v = at.init();
      std::vector<std::uint64_t> history;
      for (std::uint64_t t = 0; t < 10ull * 2 * k; ++t) {
        if (t > 0) act = at.next(act);
        if (at.needs_maintenance(act)) v = at.preserve_fast(v, act);
        if (std::bernoulli_distribution(p_set)(rng)) {
          v = at.set(v, act);
          history.push_back(t);
        }
        for (std::uint32_t kp = 1; kp <= k; ++kp) {
          mismatches += at.check(v, act, kp) != counter_active(history, t, kp);
          ++checks;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 30.0,
          fmt("%llu mismatches in %llu checks, %.2f s", (unsigned long long)mismatches,
              (unsigned long long)checks, secs)};
}

Outcome preserve_equivalence() {
  const auto t0 = Clock::now();
  std::uint64_t mismatches = 0, cases = 0;
  for (std::uint32_t k = 1; k <= 64; ++k) {
    const AtCounter at(k);
    for (std::uint32_t v = 0; v <= 2 * k; ++v) {
      for (std::uint32_t act : {0u, k}) {
        mismatches += at.preserve_fast({v}, {act}) != at.preserve_general({v}, {act});
        ++cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 5.0,
          fmt("%llu mismatches in %llu cases, %.3f s", (unsigned long long)mismatches, (unsigned long long)cases,
              secs)};
}

Outcome maintenance_amortization() {
  constexpr unsigned c = 16;
  constexpr std::uint32_t k = 30;
  AtPool at(c, k);
  DrPool dr(c, k);
  std::mt19937_64 rng(5);
  std::vector<int> per_block_first(at.block_count(), 0), per_block_second(at.block_count(), 0);
  bool bounded = true, dr_full = true;
  std::uint64_t worst = 0;
  for (std::uint32_t t = 0; t < 4 * k; ++t) {
    for (int s = 0; s < 2000; ++s) {
      const std::size_t cell = rng() % at.size();
      at.set(cell);
      dr.set(cell);
    }
    const MaintenanceReport r = at.advance();
    auto& counts = t < 2 * k ? per_block_first : per_block_second;
    for (std::uint32_t b : r.blocks) ++counts[b];
    worst = std::max(worst, r.cells_maintained);
    bounded &= r.cells_maintained <= 2 * at.max_block_size();
    dr_full &= dr.advance().cells_maintained == at.size();
  }
  const bool twice = std::all_of(per_block_first.begin(), per_block_first.end(), [](int n) { return n == 2; }) &&
                     std::all_of(per_block_second.begin(), per_block_second.end(), [](int n) { return n == 2; });
  return {twice && bounded && dr_full,
          fmt("every block maintained twice per 2k slices: %s; max per-slice %llu <= %llu; DR %s 2^c per slice",
              twice ? "yes" : "no", (unsigned long long)worst, (unsigned long long)(2 * at.max_block_size()),
              dr_full ? "maintains" : "does not maintain")};
}

Outcome bit_widths() {
  const DrPool dr(20, 300);
  const AtPool at(20, 300);
  const double ideal = (std::size_t{1} << 20) * 10.0 / 8.0 + AtPool::kSnapshotHeaderBytes;
  const double actual = static_cast<double>(at.memory_bytes() + AtPool::kSnapshotHeaderBytes);
  const double rel = std::abs(actual - ideal) / ideal;
  return {dr.bits_per_counter() == 9 && at.bits_per_counter() == 10 && rel <= 0.01,
          fmt("DR %u bits, AT %u bits, AT pool %.0f bytes vs %.0f (%.4f%%)", dr.bits_per_counter(),
              at.bits_per_counter(), actual, ideal, 100 * rel)};
}

std::string binary_trace(const SyntheticTrace& trace) {
  std::ostringstream out;
  TraceWriter writer(out, TraceFormat::Binary);
  for (const auto& r : trace.records) writer.write(r);
  return out.str();
}

Outcome estimator_equivalence() {
  SyntheticSpec spec;
  spec.hosts = log_spaced_plan(400, 100, 5000, 20);
  for (std::uint32_t i = 0; i < spec.hosts.size(); ++i) spec.hosts[i].first_slice = i % 40;
  spec.repetition = 2.0;
  spec.seed = 55;
  const SyntheticTrace trace = generate_synthetic(spec);

  const EstimatorConfig config{18, 1024, 30, 7};
  VateEstimator at(config);
  VdreEstimator dr(config);
  VtseEstimator ts(config);
  HostRegistry registry;
  const unsigned workers = default_workers();
  std::uint64_t compared = 0, mismatches = 0;
  std::size_t next = 0;
  for (std::uint64_t slice = 0; slice < trace.slices; ++slice) {
    const std::uint64_t end = spec.start_us + (slice + 1) * spec.slice_us;
    for (; next < trace.records.size() && trace.records[next].timestamp_us < end; ++next) {
      const auto& r = trace.records[next];
      at.record(r.aip, r.bip);
      dr.record(r.aip, r.bip);
      ts.record(r.aip, r.bip);
      registry.observe(r.aip, slice);
    }
    for (std::uint32_t kp : {1u, 15u, 30u}) {
      const auto hosts = registry.active(slice, kp);
      const auto ra = at.estimate_all(hosts, kp, workers);
      const auto rd = dr.estimate_all(hosts, kp, workers);
      const auto rt = ts.estimate_all(hosts, kp, workers);
      for (std::size_t h = 0; h < ra.size(); ++h) {
        mismatches += !(ra[h] == rd[h] && ra[h] == rt[h]);
        ++compared;
      }
    }
    at.advance(workers);
    dr.advance(workers);
    ts.advance(workers);
    registry.expire(slice + 1, config.k);
  }

  RunConfig run;
  run.format = TraceFormat::Binary;
  run.c = 18;
  run.g = 1024;
  run.k = 30;
  run.k_prime = 30;
  run.seed = 7;
  run.workers = workers;
  std::istringstream in(binary_trace(trace));
  std::ostringstream out;
  const CompareSummary cmp = run_compare(run, in, out);
  return {mismatches == 0 && cmp.mismatch_rows == 0 && trace.records.size() >= 1'000'000,
          fmt("%zu pairs; %llu mismatches in %llu reports; compare: %llu mismatch rows of %llu", trace.records.size(),
              (unsigned long long)mismatches, (unsigned long long)compared,
              (unsigned long long)cmp.mismatch_rows, (unsigned long long)cmp.run.rows)};
}

// ---------------------------------------------------------------------------
// Accuracy runs shared by the accuracy, monotonicity and throughput checks.

constexpr std::uint32_t kWindow = 30;
constexpr int kSeeds = 5;

SyntheticTrace accuracy_trace(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.hosts = log_spaced_plan(1000, 100, 5000, kWindow);
  spec.seed = seed;
  spec.k_prime = kWindow;
  return generate_synthetic(spec);
}

RunConfig accuracy_config(unsigned c, std::uint32_t g, std::uint64_t seed) {
  RunConfig run;
  run.format = TraceFormat::Binary;
  run.c = c;
  run.g = g;
  run.k = kWindow;
  run.k_prime = kWindow;
  run.seed = seed;
  run.floor = 0;
  run.workers = default_workers();
  return run;
}

// aip -> estimate at the last slice end
std::map<std::string, double> final_estimates(const RunConfig& run, const std::string& trace,
                                              std::uint64_t last_slice) {
  std::istringstream in(trace);
  std::ostringstream out;
  run_estimate(run, in, out);
  std::map<std::string, double> est;
  std::istringstream rows(out.str());
  std::string line;
  std::getline(rows, line);
  const std::string prefix = std::to_string(last_slice) + ",";
  while (std::getline(rows, line)) {
    if (!line.starts_with(prefix)) continue;
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    const auto c = line.find(',', b + 1);
    est[line.substr(a + 1, b - a - 1)] = std::stod(line.substr(b + 1, c - b - 1));
  }
  return est;
}

struct HostResult {
  double truth = 0;
  double at_c22_g4096 = 0;
  double at_c16_g4096 = 0;
  double at_c22_g1024 = 0;
};

struct SeedRun {
  std::vector<HostResult> hosts;
  double seconds = 0;
};

double rel_err(double est, double truth) { return std::abs(est - truth) / truth; }

std::vector<SeedRun> accuracy_runs() {
  std::vector<SeedRun> runs;
  for (int s = 0; s < kSeeds; ++s) {
    const std::uint64_t seed = 1000 + s;
    const SyntheticTrace trace = accuracy_trace(seed);
    const std::string bytes = binary_trace(trace);
    const std::uint64_t last = trace.slices - 1;
    const auto t0 = Clock::now();
    const auto main = final_estimates(accuracy_config(22, 4096, seed), bytes, last);
    const double secs = seconds_since(t0);
    const auto small_pool = final_estimates(accuracy_config(16, 4096, seed), bytes, last);
    const auto small_g = final_estimates(accuracy_config(22, 1024, seed), bytes, last);
    SeedRun run;
    run.seconds = secs;
    for (const auto& row : trace.truth) {
      if (row.window_end != last) continue;
      const std::string ip = format_ipv4(row.aip);
      run.hosts.push_back({static_cast<double>(row.cardinality), main.at(ip), small_pool.at(ip), small_g.at(ip)});
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

Outcome accuracy(const std::vector<SeedRun>& runs) {
  double mean_sum = 0, p95_sum = 0, slowest = 0;
  std::size_t hosts = 0;
  for (const SeedRun& run : runs) {
    std::vector<double> errs;
    for (const auto& h : run.hosts) errs.push_back(rel_err(h.at_c22_g4096, h.truth));
    std::sort(errs.begin(), errs.end());
    double sum = 0;
    for (double e : errs) sum += e;
    mean_sum += sum / errs.size();
    p95_sum += errs[static_cast<std::size_t>(std::ceil(0.95 * errs.size())) - 1];
    slowest = std::max(slowest, run.seconds);
    hosts = run.hosts.size();
  }
  const double mean = mean_sum / runs.size(), p95 = p95_sum / runs.size();
  return {hosts == 1000 && mean <= 0.10 && p95 <= 0.25 && slowest < 300.0,
          fmt("%zu hosts x %zu seeds: mean rel. error %.2f%% (<= 10%%), p95 %.2f%% (<= 25%%), slowest run %.1f s",
              hosts, runs.size(), 100 * mean, 100 * p95, slowest)};
}

Outcome monotonicity(const std::vector<SeedRun>& runs) {
  double big = 0, small = 0;
  int trend_seeds = 0;
  for (const SeedRun& run : runs) {
    double b = 0, s = 0;
    bool trend = false;
    for (const auto& h : run.hosts) {
      b += rel_err(h.at_c22_g4096, h.truth);
      s += rel_err(h.at_c16_g4096, h.truth);
      if (h.truth >= 4000 && h.at_c22_g1024 < 0.8 * h.truth && rel_err(h.at_c22_g4096, h.truth) <= 0.15) {
        trend = true;
      }
    }
    big += b / run.hosts.size();
    small += s / run.hosts.size();
    trend_seeds += trend;
  }
  big /= runs.size();
  small /= runs.size();
  const bool pool_ok = big < small;
  const bool g_ok = 2 * trend_seeds > static_cast<int>(runs.size());
  return {pool_ok && g_ok,
          fmt("mean rel. error c=22 %.2f%% vs c=16 %.2f%%; g=1024 underestimate trend in %d of %zu seeds",
              100 * big, 100 * small, trend_seeds, runs.size())};
}

Outcome throughput() {
  const SyntheticTrace trace = accuracy_trace(999);
  const std::string bytes = binary_trace(trace);
  RunConfig run = accuracy_config(22, 4096, 999);
  run.floor.reset();
  std::istringstream in(bytes);
  std::ostringstream out;
  const auto t0 = Clock::now();
  const RunSummary s = run_estimate(run, in, out);
  const double secs = seconds_since(t0);
  const double rate = s.records / secs;
  return {rate >= 1e6, fmt("%llu pairs in %.2f s = %.0f pairs/s with %u workers (>= 1e6)",
                           (unsigned long long)s.records, secs, rate, run.workers)};
}

Outcome determinism() {
  SyntheticSpec spec;
  spec.hosts = pareto_plan(300, 1.1, 20, 8000, 12, 4);
  for (std::uint32_t i = 0; i < spec.hosts.size(); ++i) spec.hosts[i].first_slice = i % 20;
  spec.repetition = 1.5;
  spec.seed = 77;
  const std::string bytes = binary_trace(generate_synthetic(spec));
  auto once = [&](unsigned workers) {
    RunConfig run;
    run.format = TraceFormat::Binary;
    run.c = 20;
    run.g = 1024;
    run.k = 10;
    run.k_prime = 10;
    run.seed = 3;
    run.workers = workers;
    run.scan_batch = 4096;
    std::istringstream in(bytes);
    std::ostringstream out;
    run_estimate(run, in, out);
    return out.str();
  };
  const unsigned def = default_workers();
  const std::string a1 = once(1), b1 = once(1), ad = once(def), bd = once(def);
  const bool ok = a1 == b1 && ad == bd;
  return {ok, fmt("workers=1 %s, workers=%u %s, across worker counts %s, %zu bytes",
                  a1 == b1 ? "identical" : "differ", def, ad == bd ? "identical" : "differ",
                  a1 == ad ? "identical" : "differ", a1.size())};
}

}  // namespace

int main() {
  report(1, "counter oracle equivalence", counter_oracle_equivalence());
  report(2, "fast/general preserve", preserve_equivalence());
  report(3, "maintenance amortization", maintenance_amortization());
  report(4, "bit widths and memory", bit_widths());
  report(5, "AT/DR/TS estimate equivalence", estimator_equivalence());
  const auto runs = accuracy_runs();
  report(6, "estimation accuracy", accuracy(runs));
  report(7, "scale monotonicity", monotonicity(runs));
  report(8, "throughput", throughput(), true);
  report(9, "determinism", determinism());
  std::printf("%d required criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
