#pragma once

#include <array>
#include <cstdint>

namespace cojump {

/// Philox4x32-10 counter-based generator. A (key, counter) pair maps to an
/// independent 128-bit block, so streams built from distinct counter words
/// never overlap and generation order is irrelevant.
class CounterRng {
 public:
  CounterRng(std::uint64_t key, std::uint32_t word2, std::uint32_t word3);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on (0,1), strictly inside, 52-bit resolution.
  double uniform01();
  /// Standard normal by quantile inversion (one uniform per variate).
  double normal();
  /// Uniform on {0, ..., n-1} by rejection.
  std::uint32_t uniform_below(std::uint32_t n);

  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 2>& key,
                                            const std::array<std::uint32_t, 4>& counter);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_;
  int pos_;
};

std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

/// Hierarchical stream labels. fork(id) derives a disjoint family; at(copy,
/// item) is the leaf generator for one (resampling copy, increment) pair, so
/// parallel copy generation reproduces bit-for-bit regardless of scheduling.
struct RngStream {
  std::uint64_t state = 0;

  RngStream() = default;
  explicit RngStream(std::uint64_t seed) : state(mix64(0x436f4a756d70ULL, seed)) {}

  RngStream fork(std::uint64_t id) const {
    RngStream s;
    s.state = mix64(state, id);
    return s;
  }
  CounterRng at(std::uint32_t copy, std::uint32_t item) const {
    return CounterRng(state, copy, item);
  }
  CounterRng scalar(std::uint32_t tag = 0) const { return at(0xFFFFFFFFu, tag); }
};

/// Standard normal quantile, rational minimax fit, |error| < 1e-15 on (0,1).
double normal_quantile(double p);

/// Two-sided absolute quantile z with P(|N(0,1)| >= z) = level.
double normal_abs_quantile(double level);

}  // namespace cojump
