#pragma once

#include <cstdint>

#include "cforge/clopen.hpp"
#include "cforge/point.hpp"

namespace cforge {

// The fixed bijection n -> phi_n between N and the canonical clopen sets.
// phi_0 is the empty set; the rest follow in (serialized length, then
// lexicographic) order of the canonical serialization.  The order is frozen:
// changing it invalidates every index-dependent construction.
//
// Backed by a process-wide cache that streams canonical forms length by
// length; behaves as if computed once (concurrent readers see consistent
// values).  Forms whose serialization exceeds kMaxSerLen (well past the
// 10^5-index desk scale) are outside the materialized range and raise.
namespace enumeration {

inline constexpr size_t kMaxSerLen = 27;

ClopenX unrank(uint64_t n);
uint64_t rank(const ClopenX& phi);

// Number of indices currently materialized for free (diagnostics only).
uint64_t materialized_count();

// psi_n(alpha, p): 1 if alpha(n) = 1, else phi_n(alpha, p).
bool psi_eval(uint64_t n, const PointB& alpha, uint64_t p);

// First n with phi_n = [eps] x {0} (the full level-0 slice).
uint64_t q_index();

}  // namespace enumeration
}  // namespace cforge
