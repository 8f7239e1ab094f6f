#include "npivq/rng.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"

using namespace npivq;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 distribution (Salmon et al. 2011).
  auto out = philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                      {0xffffffffu, 0xffffffffu});
  CHECK(out[0] == 0x408f276du);
  CHECK(out[1] == 0x41c83b0eu);
  CHECK(out[2] == 0xa20bc7c6u);
  CHECK(out[3] == 0x6d5451fdu);

  out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                      {0xa4093822u, 0x299f31d0u});
  CHECK(out[0] == 0xd16cfe09u);
  CHECK(out[1] == 0x94fdccebu);
  CHECK(out[2] == 0x5001e420u);
  CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and independent of other streams") {
  RngStream a(42, 7, 3);
  std::vector<std::uint64_t> first;
  for (int i = 0; i < 16; ++i) first.push_back(a.next_u64());

  RngStream b(42, 7, 3);
  for (int i = 0; i < 16; ++i) CHECK(b.next_u64() == first[i]);

  // A different stream id diverges immediately.
  RngStream c(42, 7, 4);
  bool any_diff = false;
  for (int i = 0; i < 16; ++i) any_diff = any_diff || (c.next_u64() != first[i]);
  CHECK(any_diff);

  RngStream d(43, 7, 3);
  any_diff = false;
  for (int i = 0; i < 16; ++i) any_diff = any_diff || (d.next_u64() != first[i]);
  CHECK(any_diff);
}

TEST_CASE("uniform and normal look sane") {
  RngStream s(1234, 0, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.005);

  double zsum = 0.0, zsum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    zsum += z;
    zsum2 += z * z;
  }
  CHECK(std::abs(zsum / n) < 0.01);
  CHECK(std::abs(zsum2 / n - 1.0) < 0.02);
}
