// slidecard: sliding-window host cardinality estimation over IP-pair traces.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "slidecard/commands.hpp"
#include "slidecard/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, slidecard::TraceFormat> kFormats{{"text", slidecard::TraceFormat::Text},
                                                             {"binary", slidecard::TraceFormat::Binary}};
const std::map<std::string, slidecard::CounterKind> kCounters{{"at", slidecard::CounterKind::At},
                                                              {"dr", slidecard::CounterKind::Dr},
                                                              {"ts", slidecard::CounterKind::Ts}};
const std::map<std::string, slidecard::Partition> kPartitions{{"tail", slidecard::Partition::TailRemainder},
                                                              {"low-dev", slidecard::Partition::LowDeviation}};

struct Options {
  slidecard::RunConfig run;
  std::string trace;
  std::string out = "-";
  double floor = -1.0;
  unsigned workers = 0;

  // gen
  std::uint32_t hosts = 100;
  std::uint32_t min_card = 100;
  std::uint32_t max_card = 5000;
  std::string distribution = "log";
  double alpha = 1.2;
  double repetition = 1.0;
  std::uint32_t universe = 1 << 20;
  std::uint32_t span = 10;
  std::string truth;
};

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--trace", o.trace, "Input trace path ('-' for stdin)")->required();
  cmd->add_option("--format", o.run.format, "Trace format")->transform(CLI::CheckedTransformer(kFormats));
  cmd->add_option("--c", o.run.c, "Pool holds 2^c counters");
  cmd->add_option("--g", o.run.g, "Virtual counters per host");
  cmd->add_option("--k", o.run.k, "Maximum window width in slices");
  cmd->add_option("--k-prime", o.run.k_prime, "Queried window width in slices");
  cmd->add_option("--slice-us", o.run.slice_us, "Slice duration in microseconds");
  cmd->add_option("--seed", o.run.seed, "Hash seed");
  cmd->add_option_function<std::string>(
         "--counter", [&o](const std::string& v) { o.run.counter = kCounters.at(v); }, "Counter kind: at, dr, ts")
      ->check(CLI::IsMember(kCounters));
  cmd->add_option_function<std::string>(
         "--partition", [&o](const std::string& v) { o.run.partition = kPartitions.at(v); },
         "AT block partition: tail, low-dev")
      ->check(CLI::IsMember(kPartitions));
  cmd->add_option("--floor", o.floor, "Only report estimates at or above this value");
  cmd->add_option("--workers", o.workers, "Worker threads (default: all cores)");
  cmd->add_option("--batch", o.run.scan_batch, "Records per scan fan-out batch");
  cmd->add_option("--out", o.out, "Output CSV path ('-' for stdout)");
  cmd->add_option("--checkpoint", o.run.checkpoint, "Write the AT pool snapshot here when done");
  cmd->add_option("--resume", o.run.resume, "Load the AT pool snapshot before processing");
}

class Files {
 public:
  std::istream& input(const std::string& path, bool binary) {
    if (path == "-") return std::cin;
    in_ = std::make_unique<std::ifstream>(path, binary ? std::ios::binary : std::ios::in);
    if (!*in_) throw InputError("cannot open " + path);
    return *in_;
  }
  std::ostream& output(const std::string& path, bool binary = false) {
    if (path == "-") return std::cout;
    outs_.push_back(std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out));
    if (!*outs_.back()) throw InputError("cannot write " + path);
    return *outs_.back();
  }

 private:
  std::unique_ptr<std::ifstream> in_;
  std::vector<std::unique_ptr<std::ofstream>> outs_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliding-window host cardinality estimation"};
  app.require_subcommand(1);
  Options o;

  auto* estimate = app.add_subcommand("estimate", "Estimate per-host cardinalities at every slice end");
  auto* exact = app.add_subcommand("exact", "Exact per-host cardinalities at every slice end");
  auto* bench = app.add_subcommand("bench", "Per-slice scan/estimate/maintenance timings");
  auto* compare = app.add_subcommand("compare", "Run AT, DR and TS pools side by side");
  for (auto* cmd : {estimate, exact, bench, compare}) add_run_options(cmd, o);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic trace with ground truth");
  gen->add_option("--hosts", o.hosts, "Number of monitored hosts");
  gen->add_option("--min-card", o.min_card, "Smallest host cardinality");
  gen->add_option("--max-card", o.max_card, "Largest host cardinality");
  gen->add_option("--distribution", o.distribution, "Cardinality plan")->check(CLI::IsMember({"log", "pareto"}));
  gen->add_option("--alpha", o.alpha, "Pareto shape");
  gen->add_option("--repetition", o.repetition, "Mean packets per distinct pair");
  gen->add_option("--universe", o.universe, "Opposite-host address universe size");
  gen->add_option("--span", o.span, "Slices each host is active for");
  gen->add_option("--slice-us", o.run.slice_us, "Slice duration in microseconds");
  gen->add_option("--k-prime", o.run.k_prime, "Window width of the ground truth");
  gen->add_option("--seed", o.run.seed, "Generator seed");
  gen->add_option("--format", o.run.format, "Trace format")->transform(CLI::CheckedTransformer(kFormats));
  gen->add_option("--out", o.out, "Trace output path")->required();
  gen->add_option("--truth", o.truth, "Ground-truth CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    Files files;
    const bool binary = o.run.format == slidecard::TraceFormat::Binary;
    if (o.floor >= 0) o.run.floor = o.floor;
    o.run.workers = o.workers == 0 ? slidecard::default_workers() : o.workers;

    if (gen->parsed()) {
      slidecard::SyntheticSpec spec;
      spec.hosts = o.distribution == "pareto"
                       ? slidecard::pareto_plan(o.hosts, o.alpha, o.min_card, o.max_card, o.span, o.run.seed)
                       : slidecard::log_spaced_plan(o.hosts, o.min_card, o.max_card, o.span);
      spec.repetition = o.repetition;
      spec.universe = o.universe;
      spec.seed = o.run.seed;
      spec.slice_us = o.run.slice_us;
      spec.start_us = spec.start_us / spec.slice_us * spec.slice_us;
      spec.k_prime = o.run.k_prime;
      const auto s = slidecard::run_gen(spec, o.run.format, files.output(o.out, binary), files.output(o.truth));
      std::cerr << "hosts=" << s.hosts << " pairs=" << s.records << " distinct_pairs=" << s.distinct_pairs
                << " slices=" << s.slices << '\n';
      return 0;
    }

    o.run.validate();
    std::istream& in = files.input(o.trace, binary);
    std::ostream& out = files.output(o.out);
    if (estimate->parsed()) slidecard::run_estimate(o.run, in, out);
    if (exact->parsed()) slidecard::run_exact(o.run, in, out);
    if (bench->parsed()) slidecard::run_bench(o.run, in, out);
    if (compare->parsed()) {
      const auto s = slidecard::run_compare(o.run, in, out);
      if (s.mismatch_rows > 0) std::cerr << "mismatch rows: " << s.mismatch_rows << '\n';
    }
    out.flush();
    return 0;
  } catch (const slidecard::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const slidecard::ContractViolation& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const slidecard::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const slidecard::OrderError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  }
}
