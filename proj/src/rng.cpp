#include "npivq/rng.hpp"

#include <cmath>

namespace npivq {

namespace {
constexpr std::uint32_t kMulA = 0xD2511F53u;
constexpr std::uint32_t kMulB = 0xCD9E8D57u;
constexpr std::uint32_t kBumpA = 0x9E3779B9u;
constexpr std::uint32_t kBumpB = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * c[2];
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0), hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1), hi1 = static_cast<std::uint32_t>(p1 >> 32);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}
}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    round_once(c, k);
    if (r < 9) {
      k[0] += kBumpA;
      k[1] += kBumpB;
    }
  }
  return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint32_t stream_hi, std::uint32_t stream_lo)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, 0u, stream_lo, stream_hi} {}

void RngStream::refill() {
  block_ = philox4x32_10(ctr_, key_);
  pos_ = 0;
  if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block index; stream id words untouched
}

std::uint64_t RngStream::next_u64() {
  if (pos_ > 2) refill();
  const std::uint64_t lo = block_[pos_];
  const std::uint64_t hi = block_[pos_ + 1];
  pos_ += 2;
  return lo | (hi << 32);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace npivq
