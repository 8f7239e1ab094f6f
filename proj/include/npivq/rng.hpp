#pragma once

#include <array>
#include <cstdint>

namespace npivq {

/// One round-10 Philox 4x32 block (Salmon et al., SC 2011). Exposed for
/// known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key);

/// Counter-based random stream. A stream is addressed by (seed, hi, lo); the
/// 64-bit block counter lives in the low two counter words, so draws from one
/// stream are a pure function of (seed, hi, lo, position) and never depend on
/// thread scheduling. Replication r at sample size n uses stream (seed, n, r).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint32_t stream_hi, std::uint32_t stream_lo);

  std::uint64_t next_u64();

  /// Uniform double in [0,1), 53 random bits.
  double uniform();

  /// Standard normal via Box-Muller (two uniforms per variate, no caching).
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;  // consumed 32-bit words in block_
};

}  // namespace npivq
