#include "slidecard/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>

#include "slidecard/oracle.hpp"
#include "slidecard/parallel.hpp"

namespace slidecard {

namespace {

std::string fixed(double v, int precision) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, precision);
  return std::string(buf.data(), end);
}

template <class Est>
void scan_slice(Est& est, HostRegistry& registry, const SliceBatch& batch, const RunConfig& config) {
  const std::span<const IpPairRecord> all(batch.records);
  for (std::size_t off = 0; off < all.size(); off += config.scan_batch) {
    const auto part = all.subspan(off, std::min(config.scan_batch, all.size() - off));
    parallel_ranges(part.size(), config.workers, [&](std::size_t begin, std::size_t end) {
      std::vector<std::uint32_t> hosts;
      hosts.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) {
        est.record(part[i].aip, part[i].bip);
        hosts.push_back(part[i].aip);
      }
      std::sort(hosts.begin(), hosts.end());
      hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
      registry.observe(hosts, batch.index);
    }, 1024);
  }
}

template <class Est>
std::vector<EstimateReport> estimate_slice(const Est& est, const HostRegistry& registry,
                                           const RunConfig& config, std::uint64_t slice) {
  const auto hosts = registry.active(slice, config.k_prime);
  return est.estimate_all(hosts, config.k_prime, config.workers);
}

template <class Est>
MaintenanceReport advance_slice(Est& est, HostRegistry& registry, const RunConfig& config,
                                std::uint64_t slice) {
  auto report = est.advance(config.workers);
  registry.expire(slice + 1, config.k);
  return report;
}

// Feeds every slice of the trace to `on_slice(batch)`.
template <class OnSlice>
RunSummary for_each_slice(const RunConfig& config, std::istream& in, OnSlice&& on_slice) {
  TraceReader reader(in, config.format);
  SliceStream stream(reader, config.slice_us);
  RunSummary summary;
  while (auto batch = stream.next()) {
    ++summary.slices;
    summary.records += batch->records.size();
    on_slice(*batch);
  }
  return summary;
}

AnyEstimator build_estimator(const RunConfig& config) {
  if (config.resume) {
    std::ifstream in(*config.resume, std::ios::binary);
    if (!in) throw ConfigError("cannot open snapshot " + *config.resume);
    AtPool pool = AtPool::load(in);
    return AnyEstimator(std::in_place_type<VateEstimator>, config.estimator(), std::move(pool));
  }
  return make_estimator(config.counter, config.estimator());
}

void write_checkpoint(const RunConfig& config, const AnyEstimator& any) {
  if (!config.checkpoint) return;
  std::ofstream out(*config.checkpoint, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write snapshot " + *config.checkpoint);
  std::get<VateEstimator>(any).pool().save(out);
}

double floor_or(const RunConfig& config, double fallback) { return config.floor.value_or(fallback); }

}  // namespace

void RunConfig::validate() const {
  WindowConfig window{k, slice_us};
  window.validate();
  window.validate_width(k_prime);
  estimator().validate();
  const std::uint64_t n = std::uint64_t{1} << c;
  if (n < 2ull * k) throw ConfigError("pool 2^c must hold at least 2k cells");
  if (counter == CounterKind::At && partition == Partition::TailRemainder && n % (2ull * k - 1) == 0) {
    throw ConfigError("tail-remainder partition needs 2k-1 not dividing 2^c; use --partition low-dev");
  }
  if (workers < 1) throw ConfigError("worker count must be positive");
  if (scan_batch < 1) throw ConfigError("scan batch must be positive");
  if (floor && *floor < 0) throw ConfigError("reporting floor must be non-negative");
  if ((checkpoint || resume) && counter != CounterKind::At) {
    throw ConfigError("checkpoint/resume is only available for the at counter");
  }
}

RunSummary run_estimate(const RunConfig& config, std::istream& trace, std::ostream& out) {
  config.validate();
  AnyEstimator any = build_estimator(config);
  const double floor = floor_or(config, kDefaultReportingFloor);
  out << "slice_end,aip,estimate,z_v,z_p,saturated\n";
  std::uint64_t rows = 0;
  RunSummary summary = std::visit([&](auto& est) {
    HostRegistry registry;
    return for_each_slice(config, trace, [&](const SliceBatch& batch) {
      scan_slice(est, registry, batch, config);
      for (const EstimateReport& r : estimate_slice(est, registry, config, batch.index)) {
        if (r.estimate < floor) continue;
        out << r.window_end << ',' << format_ipv4(r.host) << ',' << fixed(r.estimate, 4) << ','
            << fixed(r.z_v, 6) << ',' << fixed(r.z_p, 8) << ',' << (r.saturated ? 1 : 0) << '\n';
        ++rows;
      }
      advance_slice(est, registry, config, batch.index);
    });
  }, any);
  write_checkpoint(config, any);
  summary.rows = rows;
  return summary;
}

RunSummary run_exact(const RunConfig& config, std::istream& trace, std::ostream& out) {
  config.validate();
  const double floor = floor_or(config, 0.0);
  SliceSetStore store(config.k);
  out << "slice_end,aip,true_cardinality\n";
  std::uint64_t rows = 0;
  RunSummary summary = for_each_slice(config, trace, [&](const SliceBatch& batch) {
    store.advance_to(batch.index);
    for (const IpPairRecord& r : batch.records) store.record(r.aip, r.bip, batch.index);
    for (const auto& [aip, n] : store.cardinalities(config.k_prime)) {
      if (static_cast<double>(n) < floor) continue;
      out << batch.index << ',' << format_ipv4(aip) << ',' << n << '\n';
      ++rows;
    }
  });
  summary.rows = rows;
  return summary;
}

RunSummary run_bench(const RunConfig& config, std::istream& trace, std::ostream& out) {
  config.validate();
  using clock = std::chrono::steady_clock;
  auto micros = [](clock::duration d) {
    return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
  };
  AnyEstimator any = build_estimator(config);
  out << "slice,ST_us,ET_us,PT_us,cells_maintained,cells_cleared\n";
  RunSummary summary = std::visit([&](auto& est) {
    HostRegistry registry;
    return for_each_slice(config, trace, [&](const SliceBatch& batch) {
      const auto t0 = clock::now();
      scan_slice(est, registry, batch, config);
      const auto t1 = clock::now();
      const auto reports = estimate_slice(est, registry, config, batch.index);
      const auto t2 = clock::now();
      const MaintenanceReport m = advance_slice(est, registry, config, batch.index);
      const auto t3 = clock::now();
      out << batch.index << ',' << micros(t1 - t0) << ',' << micros(t2 - t1) << ',' << micros(t3 - t2)
          << ',' << m.cells_maintained << ',' << m.cells_cleared << '\n';
      (void)reports;
    });
  }, any);
  write_checkpoint(config, any);
  summary.rows = summary.slices;
  return summary;
}

CompareSummary run_compare(const RunConfig& config, std::istream& trace, std::ostream& out) {
  config.validate();
  VateEstimator at(config.estimator());
  VdreEstimator dr(config.estimator());
  VtseEstimator ts(config.estimator());
  HostRegistry registry;
  const double floor = floor_or(config, 0.0);

  CompareSummary result;
  result.costs = {{CounterKind::At, 0, at.pool().bits_per_counter()},
                  {CounterKind::Dr, 0, dr.pool().bits_per_counter()},
                  {CounterKind::Ts, 0, ts.pool().bits_per_counter()}};
  out << "slice_end,aip,at,dr,ts,mismatch\n";
  std::uint64_t rows = 0;
  result.run = for_each_slice(config, trace, [&](const SliceBatch& batch) {
    // The registry is shared; observing the same hosts three times is harmless.
    scan_slice(at, registry, batch, config);
    scan_slice(dr, registry, batch, config);
    scan_slice(ts, registry, batch, config);
    const auto ra = estimate_slice(at, registry, config, batch.index);
    const auto rd = estimate_slice(dr, registry, config, batch.index);
    const auto rt = estimate_slice(ts, registry, config, batch.index);
    for (std::size_t h = 0; h < ra.size(); ++h) {
      const bool mismatch = !(ra[h] == rd[h] && ra[h] == rt[h]);
      result.mismatch_rows += mismatch;
      if (!mismatch && std::max({ra[h].estimate, rd[h].estimate, rt[h].estimate}) < floor) continue;
      out << ra[h].window_end << ',' << format_ipv4(ra[h].host) << ',' << fixed(ra[h].estimate, 4) << ','
          << fixed(rd[h].estimate, 4) << ',' << fixed(rt[h].estimate, 4) << ',' << (mismatch ? 1 : 0) << '\n';
      ++rows;
    }
    result.costs[0].maintenance_ops += at.advance(config.workers).cells_maintained;
    result.costs[1].maintenance_ops += dr.advance(config.workers).cells_maintained;
    result.costs[2].maintenance_ops += ts.advance(config.workers).cells_maintained;
    registry.expire(batch.index + 1, config.k);
  });
  result.run.rows = rows;
  for (const KindCost& cost : result.costs) {
    out << "summary," << to_string(cost.kind) << ',' << cost.maintenance_ops << ',' << cost.bits_per_counter
        << '\n';
  }
  return result;
}

GenSummary run_gen(const SyntheticSpec& spec, TraceFormat format, std::ostream& trace_out,
                   std::ostream& truth_out) {
  const SyntheticTrace trace = generate_synthetic(spec);
  TraceWriter writer(trace_out, format);
  for (const IpPairRecord& r : trace.records) writer.write(r);
  write_ground_truth(truth_out, trace.truth);
  return {spec.hosts.size(), trace.records.size(), trace.distinct_pairs, trace.slices};
}

}  // namespace slidecard
