#include "slidecard/packed_array.hpp"

#include <algorithm>

#include "slidecard/errors.hpp"

namespace slidecard {

PackedArray::PackedArray(std::size_t size, unsigned width, std::uint32_t fill_value)
    : size_(size), width_(width) {
  if (width < 1 || width > 32) throw ContractViolation("packed cell width must be in [1, 32]");
  mask_ = (std::uint64_t{1} << width) - 1;
  words_.assign(words_for(size, width), 0);
  fill(fill_value);
}

void PackedArray::fill(std::uint32_t value) {
  if ((value & mask_) == 0) {
    std::fill(words_.begin(), words_.end(), 0);
    return;
  }
  // Repeat the cell pattern over 64 * width bits, which is word-periodic.
  const std::size_t period = width_;
  std::vector<std::uint64_t> pattern(period, 0);
  for (std::size_t cell = 0; cell < 64; ++cell) {
    const std::size_t bit = cell * width_;
    const std::uint64_t v = value & mask_;
    pattern[bit >> 6] |= v << (bit & 63);
    if ((bit & 63) + width_ > 64) pattern[(bit >> 6) + 1] |= v >> (64 - (bit & 63));
  }
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] = pattern[w % period];
  // Clear padding beyond the last cell so equal arrays compare equal.
  const std::size_t used = size_ * width_;
  if (used % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (used % 64)) - 1;
  }
}

}  // namespace slidecard
