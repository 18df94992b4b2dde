#include <random>
#include <thread>
#include <vector>

#include "doctest.h"
#include "slidecard/errors.hpp"
#include "slidecard/packed_array.hpp"

using slidecard::PackedArray;

TEST_CASE("packed array behaves like a vector of masked integers") {
  std::mt19937_64 rng(11);
  for (unsigned width = 1; width <= 32; ++width) {
    const std::size_t n = 1 + rng() % 700;
    const std::uint64_t limit = (std::uint64_t{1} << width) - 1;
    const auto fill = static_cast<std::uint32_t>(rng() & limit);
    PackedArray packed(n, width, fill);
    std::vector<std::uint32_t> model(n, fill);
    CHECK(packed.memory_bytes() == PackedArray::words_for(n, width) * 8);
    for (int op = 0; op < 3000; ++op) {
      const std::size_t i = rng() % n;
      const auto v = static_cast<std::uint32_t>(rng() & limit);
      packed.store(i, v);
      model[i] = v;
    }
    for (std::size_t i = 0; i < n; ++i) REQUIRE(packed.load(i) == model[i]);
  }
}

TEST_CASE("fill clears the padding bits") {
  PackedArray a(7, 10, 600);
  PackedArray b(7, 10, 0);
  for (std::size_t i = 0; i < 7; ++i) b.store(i, 600);
  CHECK(a == b);
}

TEST_CASE("concurrent stores to adjacent cells do not clobber each other") {
  constexpr std::size_t n = 1 << 14;
  PackedArray packed(n, 10, 0);
  std::vector<std::jthread> threads;
  for (unsigned t = 0; t < 4; ++t) {
    threads.emplace_back([&packed, t] {
      for (int round = 0; round < 4; ++round) {
        for (std::size_t i = t; i < n; i += 4) packed.store(i, static_cast<std::uint32_t>((i * 7 + round) % 1024));
      }
    });
  }
  threads.clear();
  for (std::size_t i = 0; i < n; ++i) REQUIRE(packed.load(i) == (i * 7 + 3) % 1024);
}

TEST_CASE("width outside [1, 32] is rejected") {
  CHECK_THROWS_AS(PackedArray(4, 0), slidecard::ContractViolation);
  CHECK_THROWS_AS(PackedArray(4, 33), slidecard::ContractViolation);
}
