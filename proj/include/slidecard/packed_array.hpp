#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace slidecard {

// Fixed-width unsigned cells packed back to back into 64-bit words. A cell may
// straddle two words. store() updates each touched word with a CAS, so
// concurrent stores to different cells never corrupt each other; loads are
// plain and must not race with stores.
class PackedArray {
 public:
  PackedArray() = default;
  PackedArray(std::size_t size, unsigned width, std::uint32_t fill = 0);

  std::size_t size() const noexcept { return size_; }
  unsigned width() const noexcept { return width_; }

  std::uint32_t load(std::size_t i) const noexcept {
    const std::size_t bit = i * width_;
    const std::size_t word = bit >> 6;
    const unsigned off = bit & 63;
    std::uint64_t v = words_[word] >> off;
    if (off + width_ > 64) v |= words_[word + 1] << (64 - off);
    return static_cast<std::uint32_t>(v & mask_);
  }

  void prefetch(std::size_t i) const noexcept { __builtin_prefetch(&words_[(i * width_) >> 6]); }

  void store(std::size_t i, std::uint32_t value) noexcept {
    const std::size_t bit = i * width_;
    const std::size_t word = bit >> 6;
    const unsigned off = bit & 63;
    const std::uint64_t v = value & mask_;
    update_word(word, mask_ << off, v << off);
    if (off + width_ > 64) {
      const unsigned spill = 64 - off;
      update_word(word + 1, mask_ >> spill, v >> spill);
    }
  }

  void fill(std::uint32_t value);

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }
  std::size_t memory_bytes() const noexcept { return words_.size() * sizeof(std::uint64_t); }

  static std::size_t words_for(std::size_t size, unsigned width) noexcept {
    return (size * width + 63) / 64;
  }

  friend bool operator==(const PackedArray&, const PackedArray&) = default;

 private:
  void update_word(std::size_t word, std::uint64_t mask, std::uint64_t bits) noexcept {
    std::atomic_ref<std::uint64_t> ref(words_[word]);
    std::uint64_t old = ref.load(std::memory_order_relaxed);
    std::uint64_t next = (old & ~mask) | bits;
    while (old != next &&
           !ref.compare_exchange_weak(old, next, std::memory_order_relaxed)) {
      next = (old & ~mask) | bits;
    }
  }

  std::size_t size_ = 0;
  unsigned width_ = 1;
  std::uint64_t mask_ = 1;
  std::vector<std::uint64_t> words_;
};

}  // namespace slidecard
