#pragma once

#include <cstdint>
#include <vector>

#include "cforge/common.hpp"
#include "cforge/topology.hpp"

namespace cforge {

// A finite topological space on at most 12 points; subsets are bitmasks.
// Exhaustive exact computations only, no sampling.
class FiniteSpace {
 public:
  // Validates: empty and full set present, closed under union/intersection.
  static FiniteSpace create(int n, std::vector<uint32_t> opens);
  static FiniteSpace discrete(int n);
  static FiniteSpace indiscrete(int n);

  int points() const { return n_; }
  uint32_t full() const { return (uint32_t{1} << n_) - 1; }
  const std::vector<uint32_t>& opens() const { return opens_; }
  bool is_open(uint32_t mask) const;

  uint32_t interior(uint32_t mask) const;
  uint32_t closure(uint32_t mask) const;
  bool is_dense(uint32_t mask) const;
  bool is_nwd(uint32_t mask) const;
  bool is_closed(uint32_t mask) const { return is_open(full() & ~mask); }

  friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

 private:
  int n_ = 0;
  std::vector<uint32_t> opens_;  // sorted, unique
};

// The refinement tau^alpha = {V minus N : V open, N nwd}.  Asserted to be a
// topology; a violation throws (it would falsify the construction).
FiniteSpace tau_alpha(const FiniteSpace& x);

// Exhaustive verification of the tau^alpha identities: the interior
// characterization of tau^alpha-opens, the closure formula for outside
// points, nodec-ness, and the density equivalence.
Certificate check_tau_alpha_identities(const FiniteSpace& x);

// All labeled topologies on n points (n <= 4), validated; 1, 4, 29, 355.
std::vector<FiniteSpace> enumerate_topologies(int n);

// Independent count via specialization preorders (finite topologies are in
// bijection with preorders); the cross-check oracle for enumerate_topologies.
uint64_t count_preorders(int n);

}  // namespace cforge
