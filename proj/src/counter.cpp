#include "slidecard/counter.hpp"

#include <string>

#include "slidecard/errors.hpp"

namespace slidecard {

namespace {

void require_window(std::uint32_t k) {
  if (k < 1 || k > kMaxWindowSlices) {
    throw ConfigError("k must be in [1, " + std::to_string(kMaxWindowSlices) + "], got " +
                      std::to_string(k));
  }
}

void require_width(std::uint32_t k_prime, std::uint32_t k) {
  if (k_prime < 1 || k_prime > k) {
    throw ContractViolation("window width k' = " + std::to_string(k_prime) +
                            " outside [1, " + std::to_string(k) + "]");
  }
}

}  // namespace

void WindowConfig::validate() const {
  require_window(k);
  if (slice_duration_us == 0) throw ConfigError("slice duration must be positive");
}

void WindowConfig::validate_width(std::uint32_t k_prime) const {
  if (k_prime < 1 || k_prime > k) {
    throw ConfigError("k' must be in [1, " + std::to_string(k) + "], got " +
                      std::to_string(k_prime));
  }
}

AtCounter::AtCounter(std::uint32_t k) : k_(k) { require_window(k); }

void AtCounter::require_act(Act act) const {
  if (act.raw >= 2 * k_) {
    throw ContractViolation("act " + std::to_string(act.raw) + " outside [0, " +
                            std::to_string(2 * k_ - 1) + "]");
  }
}

AtValue AtCounter::set(AtValue, Act act) const {
  require_act(act);
  return {act.raw};
}

std::uint32_t AtCounter::distance(AtValue v, Act act) const {
  require_act(act);
  if (v.raw >= 2 * k_) throw ContractViolation("distance of an inactive AT is undefined");
  return (act.raw + 2 * k_ - v.raw) % (2 * k_);
}

bool AtCounter::check(AtValue v, Act act, std::uint32_t k_prime) const {
  require_width(k_prime, k_);
  if (is_inactive(v)) return false;
  return distance(v, act) <= k_prime - 1;
}

AtValue AtCounter::preserve_general(AtValue v, Act act) const noexcept {
  if (v.raw >= 2 * k_ || act.raw >= 2 * k_) return v;
  std::uint32_t dis = (act.raw + 2 * k_ - v.raw) % (2 * k_);
  if (dis == 0) dis = 2 * k_;
  return dis >= k_ ? inactive() : v;
}

DrCounter::DrCounter(std::uint32_t k) : k_(k) { require_window(k); }

bool DrCounter::check(DrValue v, std::uint32_t k_prime) const {
  require_width(k_prime, k_);
  return v.raw < k_prime;
}

TsValue ts_set(TsValue current, std::uint64_t slice) {
  if (current.ever_set() && slice < current.last_seen) {
    throw ContractViolation("timestamp counter set with a slice older than its last set");
  }
  return {slice};
}

bool ts_check(TsValue v, std::uint64_t slice, std::uint32_t k_prime) {
  if (k_prime < 1) throw ContractViolation("window width k' must be positive");
  return v.ever_set() && v.last_seen <= slice && slice - v.last_seen < k_prime;
}

}  // namespace slidecard
