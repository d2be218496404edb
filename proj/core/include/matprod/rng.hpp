#pragma once

#include <cstdint>

namespace matprod {

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4B7C15ULL;

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}
}  // namespace detail

/// Counter-based random stream. Output k of stream (seed, id) is a pure
/// function of (seed, id, k), so per-replicate streams can be created in any
/// order on any thread and always produce the same sequence. This is what
/// makes batch output independent of the thread count.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(detail::mix64(detail::mix64(seed + detail::kGolden) ^
                             detail::mix64(stream + 0xD1B54A32D192ED03ULL))),
        stream_(stream) {}

  std::uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  std::uint64_t stream_id() const { return stream_; }

 private:
  std::uint64_t state_;
  std::uint64_t stream_;
};

}  // namespace matprod
