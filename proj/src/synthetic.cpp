#include "slidecard/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <tuple>
#include <unordered_set>

#include "slidecard/errors.hpp"

namespace slidecard {

namespace {

constexpr std::uint32_t kOppositeBase = 0x40000000u;  // 64.0.0.0
constexpr std::uint32_t kMaxUniverse = 1u << 30;

// Floyd's sampling of n distinct values from [0, universe).
std::vector<std::uint32_t> sample_distinct(std::uint32_t n, std::uint32_t universe,
                                           std::mt19937_64& rng) {
  std::unordered_set<std::uint32_t> chosen;
  chosen.reserve(n * 2);
  std::vector<std::uint32_t> out;
  out.reserve(n);
  for (std::uint32_t j = universe - n; j < universe; ++j) {
    const auto t = std::uniform_int_distribution<std::uint32_t>(0, j)(rng);
    const std::uint32_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    out.push_back(pick);
  }
  return out;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (slice_us == 0) throw ConfigError("slice duration must be positive");
  if (start_us % slice_us != 0) throw ConfigError("start time must be a multiple of the slice duration");
  if (k_prime < 1) throw ConfigError("ground-truth window width must be positive");
  if (!(repetition >= 1.0)) throw ConfigError("repetition factor must be at least 1");
  if (universe < 1 || universe > kMaxUniverse) throw ConfigError("opposite-host universe must be in [1, 2^30]");
  for (const HostPlan& h : hosts) {
    if (h.cardinality > universe) {
      throw ConfigError("host cardinality " + std::to_string(h.cardinality) +
                        " exceeds the opposite-host universe " + std::to_string(universe));
    }
    if (h.span < 1) throw ConfigError("host activity span must be at least one slice");
  }
  std::unordered_set<std::uint32_t> seen;
  for (const HostPlan& h : hosts) {
    if (!seen.insert(h.aip).second) {
      throw ConfigError("host plan lists " + format_ipv4(h.aip) + " more than once");
    }
  }
}

SyntheticTrace generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::poisson_distribution<std::uint32_t> extra(spec.repetition - 1.0);

  struct PairSlices {
    std::uint32_t host;
    std::vector<std::uint64_t> slices;
  };
  std::vector<PairSlices> pairs;
  SyntheticTrace trace;
  std::uint64_t min_slice = UINT64_MAX;

  for (std::uint32_t h = 0; h < spec.hosts.size(); ++h) {
    const HostPlan& plan = spec.hosts[h];
    std::uniform_int_distribution<std::uint64_t> slice_pick(plan.first_slice,
                                                            plan.first_slice + plan.span - 1);
    for (std::uint32_t u : sample_distinct(plan.cardinality, spec.universe, rng)) {
      const std::uint32_t packets = 1 + (spec.repetition > 1.0 ? extra(rng) : 0);
      PairSlices ps{h, {}};
      ps.slices.reserve(packets);
      for (std::uint32_t p = 0; p < packets; ++p) {
        const std::uint64_t s = slice_pick(rng);
        ps.slices.push_back(s);
        min_slice = std::min(min_slice, s);
        const std::uint64_t offset =
            std::uniform_int_distribution<std::uint64_t>(0, spec.slice_us - 1)(rng);
        trace.records.push_back({spec.start_us + s * spec.slice_us + offset, plan.aip, kOppositeBase + u});
      }
      pairs.push_back(std::move(ps));
    }
  }
  trace.distinct_pairs = pairs.size();

  std::shuffle(trace.records.begin(), trace.records.end(), rng);
  std::stable_sort(trace.records.begin(), trace.records.end(),
                   [](const IpPairRecord& a, const IpPairRecord& b) { return a.timestamp_us < b.timestamp_us; });
  if (trace.records.empty()) return trace;

  std::uint64_t last_slice = 0;
  for (const auto& ps : pairs) {
    for (std::uint64_t s : ps.slices) last_slice = std::max(last_slice, s - min_slice);
  }
  trace.slices = last_slice + 1;

  // A pair counts toward windows ending in [s, s + k' - 1] for each slice s it
  // appears in; merge those intervals per pair and accumulate per host.
  std::vector<std::vector<std::int64_t>> diff(spec.hosts.size());
  for (auto& ps : pairs) {
    auto& d = diff[ps.host];
    if (d.empty()) d.assign(trace.slices + 1, 0);
    std::sort(ps.slices.begin(), ps.slices.end());
    std::uint64_t open = 0, close = 0;
    bool have = false;
    for (std::uint64_t abs : ps.slices) {
      const std::uint64_t s = abs - min_slice;
      const std::uint64_t e = std::min<std::uint64_t>(s + spec.k_prime, trace.slices);
      if (have && s <= close) {
        close = std::max(close, e);
        continue;
      }
      if (have) {
        d[open] += 1;
        d[close] -= 1;
      }
      open = s;
      close = e;
      have = true;
    }
    d[open] += 1;
    d[close] -= 1;
  }
  for (std::uint64_t t = 0; t < trace.slices; ++t) {
    for (std::uint32_t h = 0; h < spec.hosts.size(); ++h) {
      auto& d = diff[h];
      if (d.empty()) continue;
      if (t > 0) d[t] += d[t - 1];
      if (d[t] > 0) {
        trace.truth.push_back({spec.hosts[h].aip, t, spec.k_prime, static_cast<std::uint64_t>(d[t])});
      }
    }
  }
  std::sort(trace.truth.begin(), trace.truth.end(), [](const auto& a, const auto& b) {
    return std::tie(a.window_end, a.aip) < std::tie(b.window_end, b.aip);
  });
  return trace;
}

std::vector<HostPlan> log_spaced_plan(std::uint32_t count, std::uint32_t lo, std::uint32_t hi,
                                      std::uint32_t span, std::uint64_t first_slice) {
  if (lo < 1 || hi < lo) throw ConfigError("cardinality range must satisfy 1 <= lo <= hi");
  std::vector<HostPlan> plan;
  plan.reserve(count);
  const double ratio = std::log(static_cast<double>(hi) / lo);
  for (std::uint32_t i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const auto n = static_cast<std::uint32_t>(std::lround(lo * std::exp(ratio * f)));
    plan.push_back({planned_host(i), std::clamp(n, lo, hi), first_slice, span});
  }
  return plan;
}

std::vector<HostPlan> pareto_plan(std::uint32_t count, double alpha, std::uint32_t lo,
                                  std::uint32_t hi, std::uint32_t span, std::uint64_t seed) {
  if (lo < 1 || hi < lo) throw ConfigError("cardinality range must satisfy 1 <= lo <= hi");
  if (!(alpha > 0.0)) throw ConfigError("Pareto shape must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<HostPlan> plan;
  plan.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const double u = 1.0 - unit(rng);  // (0, 1]
    const double n = lo / std::pow(u, 1.0 / alpha);
    plan.push_back({planned_host(i), static_cast<std::uint32_t>(std::min<double>(n, hi)), 0, span});
  }
  return plan;
}

void write_ground_truth(std::ostream& out, std::span<const GroundTruthRow> rows) {
  out << "aip,window_end_slice,k_prime,true_cardinality\n";
  for (const auto& r : rows) {
    out << format_ipv4(r.aip) << ',' << r.window_end << ',' << r.k_prime << ',' << r.cardinality << '\n';
  }
}

std::vector<GroundTruthRow> read_ground_truth(std::istream& in) {
  std::vector<GroundTruthRow> rows;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && line.starts_with("aip,"))) continue;
    std::string_view rest(line);
    auto field = [&]() {
      const auto comma = rest.find(',');
      std::string_view f = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      return f;
    };
    auto number = [&](std::string_view f, auto& v) {
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || p != f.data() + f.size() || f.empty()) {
        throw ParseError("bad ground-truth number '" + std::string(f) + "'", line_no);
      }
    };
    GroundTruthRow r;
    const auto aip = parse_ipv4(field());
    if (!aip) throw ParseError("bad ground-truth address", line_no);
    r.aip = *aip;
    number(field(), r.window_end);
    number(field(), r.k_prime);
    number(field(), r.cardinality);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace slidecard
