#pragma once

#include <array>
#include <cstdint>

namespace effsens {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Seeding scheme used throughout the library: the 64-bit seed forms the
/// 2x32-bit key; the 128-bit counter is (index_lo, index_hi, stream, 0).
/// Any (seed, stream, index) triple therefore maps to one fixed block on
/// every platform, and independent draws never share state.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Random-access uniform variates: value(index) of a given (seed, stream).
class CounterUniform {
 public:
  CounterUniform(std::uint64_t seed, std::uint32_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t index) const;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint32_t stream_;
};

/// Sequential stream on top of CounterUniform, for algorithms that need an
/// unknown number of draws (shuffles, rejection sampling).
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint32_t stream) : source_(seed, stream) {}

  std::uint64_t next_u64() { return source_.bits(counter_++); }
  double next_uniform() { return source_.uniform(counter_++); }
  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t next_below(std::uint64_t bound);

 private:
  CounterUniform source_;
  std::uint64_t counter_ = 0;
};

/// Stream identifiers; fixed so reports stay reproducible across releases.
namespace streams {
inline constexpr std::uint32_t kSplitShuffle = 0x5350u;
inline constexpr std::uint32_t kModelInputs = 0x1000u;   // + input column
inline constexpr std::uint32_t kPickFreeze = 0x2000u;    // + input column
inline constexpr std::uint32_t kRejection = 0x3000u;
}  // namespace streams

}  // namespace effsens
