#pragma once

#include <cstdint>

namespace nbp {

// PCG32 (O'Neill's pcg32_srandom / pcg32_random). The stream id selects the
// LCG increment, so distinct ids walk unrelated orbits of the same generator;
// a (seed, stream) pair fully determines the draw sequence bit-for-bit.
class RngStream {
public:
  RngStream() : RngStream(0, 0) {}

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) {
    state_ = 0u;
    inc_ = (stream_id << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t next_u64() {
    const auto hi = static_cast<std::uint64_t>(next_u32());
    return (hi << 32) | next_u32();
  }

  /// uniform on [0,1) with 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// uniform on the open interval (0,1); never returns an endpoint
  double uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// unbiased integer in [0, n), n >= 1 (rejection on the top of the range)
  std::uint32_t bounded(std::uint32_t n) {
    const std::uint32_t threshold = (0u - n) % n;
    for (;;) {
      const std::uint32_t r = next_u32();
      if (r >= threshold) return r % n;
    }
  }

  // raw state access for checkpointing
  std::uint64_t state() const { return state_; }
  std::uint64_t increment() const { return inc_; }
  static RngStream restore(std::uint64_t state, std::uint64_t increment) {
    RngStream r;
    r.state_ = state;
    r.inc_ = increment;
    return r;
  }

  bool operator==(const RngStream&) const = default;

private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 1;
};

// Stream-id namespace: every consumer of randomness derives its stream from
// the single run seed through one of these purposes, so no two subsystems can
// ever share a sequence.
namespace streams {
inline constexpr std::uint64_t kSplitDoc = 1;
inline constexpr std::uint64_t kChain = 2;
inline constexpr std::uint64_t kSimTruth = 3;
inline constexpr std::uint64_t kSimDoc = 4;
inline constexpr std::uint64_t kScratch = 15;

inline constexpr std::uint64_t id(std::uint64_t purpose, std::uint64_t index) {
  return (purpose << 32) | (index & 0xffffffffULL);
}
}  // namespace streams

}  // namespace nbp
