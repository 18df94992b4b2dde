#include "slidecard/at_pool.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <istream>
#include <ostream>
#include <string>

#include "slidecard/errors.hpp"
#include "slidecard/parallel.hpp"

namespace slidecard {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'T', 'P', '1'};

template <class T>
void put_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> buf{};
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

template <class T>
T get_le(std::istream& in, std::uint64_t offset) {
  std::array<unsigned char, sizeof(T)> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw ParseError("truncated pool snapshot", offset);
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

std::string_view to_string(Partition p) noexcept {
  return p == Partition::TailRemainder ? "tail" : "low-dev";
}

AtPool::AtPool(unsigned c, std::uint32_t k, Partition partition)
    : c_(c), counter_(k), partition_(partition) {
  if (c > kMaxLog2Cells) {
    throw ConfigError("c must be at most " + std::to_string(kMaxLog2Cells) + ", got " +
                      std::to_string(c));
  }
  const std::uint64_t n = std::uint64_t{1} << c;
  const std::uint64_t blocks = 2ull * k;
  if (n < blocks) {
    throw ConfigError("pool of 2^" + std::to_string(c) + " cells cannot hold 2k = " +
                      std::to_string(blocks) + " non-empty blocks");
  }
  a_ = n / (blocks - 1);
  b_ = n % (blocks - 1);
  a2_ = n / blocks;
  b2_ = n % blocks;
  if (partition == Partition::TailRemainder && b_ == 0) {
    throw ConfigError("tail-remainder partition leaves the last block empty when 2k-1 divides 2^c (k = " +
                      std::to_string(k) + "); use the low-deviation partition");
  }
  cells_ = PackedArray(n, counter_.width(), counter_.inactive().raw);
}

std::uint32_t AtPool::block_of(std::size_t i) const {
  if (i >= size()) throw ContractViolation("cell index " + std::to_string(i) + " out of range");
  return block_of_unchecked(i);
}

Act AtPool::block_act(std::uint32_t block) const {
  if (block >= block_count()) throw ContractViolation("block index out of range");
  return {(bact0_.raw + block) % block_count()};
}

std::size_t AtPool::block_begin(std::uint32_t block) const noexcept {
  const std::uint64_t two_k = block_count();
  if (block >= two_k) return size();
  if (partition_ == Partition::TailRemainder) return block * a_;
  if (block <= two_k - b2_) return block * a2_;
  return block * (a2_ + 1) - (two_k - b2_);
}

std::size_t AtPool::max_block_size() const noexcept {
  std::size_t best = 0;
  for (std::uint32_t b = 0; b < block_count(); ++b) best = std::max(best, block_size(b));
  return best;
}

AtValue AtPool::value(std::size_t i) const {
  if (i >= size()) throw ContractViolation("cell index " + std::to_string(i) + " out of range");
  return {cells_.load(i)};
}

void AtPool::set(std::size_t i) {
  if (i >= size()) throw ContractViolation("cell index " + std::to_string(i) + " out of range");
  const std::uint32_t act = (bact0_.raw + block_of_unchecked(i)) % block_count();
  if (cells_.load(i) != act) cells_.store(i, act);
}

bool AtPool::check(std::size_t i, std::uint32_t k_prime) const {
  if (i >= size()) throw ContractViolation("cell index " + std::to_string(i) + " out of range");
  return counter_.check({cells_.load(i)}, {(bact0_.raw + block_of_unchecked(i)) % block_count()},
                        k_prime);
}

std::uint64_t AtPool::count_inactive(std::size_t begin, std::size_t end,
                                     std::uint32_t k_prime) const noexcept {
  const std::uint32_t two_k = block_count();
  std::uint64_t inactive = 0;
  std::size_t i = begin;
  std::uint32_t block = block_of_unchecked(begin);
  while (i < end) {
    const std::size_t stop = std::min(end, block_begin(block + 1));
    const std::uint32_t act = (bact0_.raw + block) % two_k;
    for (; i < stop; ++i) {
      const std::uint32_t v = cells_.load(i);
      // distance (act - v) mod 2k must be at most k' - 1
      const std::uint32_t distance = act >= v ? act - v : act + two_k - v;
      inactive += v == two_k || distance >= k_prime;
    }
    ++block;
  }
  return inactive;
}

std::uint64_t AtPool::inactive_count(std::uint32_t k_prime, unsigned workers) const {
  if (k_prime < 1 || k_prime > k()) throw ContractViolation("window width k' out of range");
  std::atomic<std::uint64_t> total{0};
  parallel_ranges(size(), workers, [&](std::size_t begin, std::size_t end) {
    total.fetch_add(count_inactive(begin, end, k_prime), std::memory_order_relaxed);
  }, 1 << 16);
  return total.load();
}

double AtPool::inactive_fraction(std::uint32_t k_prime, unsigned workers) const {
  return static_cast<double>(inactive_count(k_prime, workers)) / static_cast<double>(size());
}

MaintenanceReport AtPool::advance(unsigned workers) {
  const std::uint32_t two_k = block_count();
  bact0_ = {(bact0_.raw + 1) % two_k};

  MaintenanceReport report;
  // the two blocks whose act is now 0 or k
  const std::uint32_t at_zero = (two_k - bact0_.raw) % two_k;
  const std::uint32_t at_k = (at_zero + k()) % two_k;
  report.blocks = {std::min(at_zero, at_k), std::max(at_zero, at_k)};

  const std::size_t first_begin = block_begin(report.blocks[0]);
  const std::size_t first_size = block_size(report.blocks[0]);
  const std::size_t second_begin = block_begin(report.blocks[1]);
  const std::size_t second_size = block_size(report.blocks[1]);
  report.cells_maintained = first_size + second_size;

  std::atomic<std::uint64_t> cleared{0};
  parallel_ranges(report.cells_maintained, workers, [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    for (std::size_t j = begin; j < end; ++j) {
      const std::size_t cell = j < first_size ? first_begin + j : second_begin + (j - first_size);
      const AtValue before{cells_.load(cell)};
      const Act act{(bact0_.raw + block_of_unchecked(cell)) % two_k};
      const AtValue after = counter_.preserve_fast(before, act);
      if (after != before) {
        cells_.store(cell, after.raw);
        if (!counter_.is_inactive(before)) ++local;
      }
    }
    cleared.fetch_add(local, std::memory_order_relaxed);
  }, 1 << 16);
  report.cells_cleared = cleared.load();
  return report;
}

void AtPool::save(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(c_));
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(partition_));
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint32_t>(out, k());
  put_le<std::uint32_t>(out, bact0_.raw);
  for (std::uint64_t w : cells_.words()) put_le<std::uint64_t>(out, w);
  if (!out) throw std::runtime_error("failed to write pool snapshot");
}

AtPool AtPool::load(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError("not a pool snapshot (bad magic)", 0);
  }
  const auto c = get_le<std::uint8_t>(in, 4);
  const auto partition = get_le<std::uint8_t>(in, 5);
  get_le<std::uint16_t>(in, 6);
  const auto k = get_le<std::uint32_t>(in, 8);
  const auto bact0 = get_le<std::uint32_t>(in, 12);
  if (partition > 1) throw ParseError("unknown partition variant in snapshot", 5);

  AtPool pool(c, k, static_cast<Partition>(partition));
  if (bact0 >= pool.block_count()) throw ParseError("snapshot bact0 out of range", 12);
  pool.bact0_ = {bact0};
  auto words = pool.cells_.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    words[w] = get_le<std::uint64_t>(in, kSnapshotHeaderBytes + 8 * w);
  }
  const std::uint32_t two_k = pool.block_count();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.cells_.load(i) > two_k) {
      throw ParseError("snapshot cell value exceeds 2k", kSnapshotHeaderBytes + i * pool.bits_per_counter() / 8);
    }
  }
  return pool;
}

}  // namespace slidecard
