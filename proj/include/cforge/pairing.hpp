#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace cforge {

// Cantor pairing: pi(i,j) = (i+j)(i+j+1)/2 + j.  This coding of N x N in N is
// fixed once and for all; every Fubini-product ideal reads its columns
// through it.
inline uint64_t pair(uint64_t i, uint64_t j) {
  uint64_t w = i + j;
  return w * (w + 1) / 2 + j;
}

inline std::pair<uint64_t, uint64_t> unpair(uint64_t n) {
  // w = floor((sqrt(8n+1)-1)/2), computed in integers.
  uint64_t w = 0;
  {
    long double r = (std::sqrt(8.0L * static_cast<long double>(n) + 1.0L) - 1.0L) / 2.0L;
    w = static_cast<uint64_t>(r);
    while (w * (w + 1) / 2 > n) --w;
    while ((w + 1) * (w + 2) / 2 <= n) ++w;
  }
  uint64_t t = w * (w + 1) / 2;
  uint64_t j = n - t;
  uint64_t i = w - j;
  return {i, j};
}

}  // namespace cforge
