#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cforge/clopen.hpp"
#include "cforge/common.hpp"
#include "cforge/ideals.hpp"
#include "cforge/point.hpp"
#include "cforge/topology.hpp"

namespace cforge {

// phi in A_m: phi nonempty, every canonical cylinder has word length exactly
// m+1 and level <= m.  Equivalent to the existential uniform-representation
// condition; canonical sibling-merging supplies the restriction-distinctness
// clause.
bool in_A_m(const ClopenX& phi, uint64_t m);

// A partial selector: choose(k) is a member of the block A_k, for k in E.
struct Selector {
  RepSet E;
  std::function<ClopenX(uint64_t)> choose;
};

// Outcome of the diagonal recursion: alpha with its computed bit prefix and
// the three certified clauses as replayable evidence.
struct DiagonalReport {
  PointB alpha;
  Word t1;
  uint64_t p1 = 0;
  uint64_t depth = 0;
  std::vector<bool> bits;  // alpha restricted to [0, depth]
  bool ok = false;
  Json evidence = Json::array();
};

// Density witness inside A_{l+1}: the least admissible l with l+1 in E and a
// clopen phi in A_{l+1} intersect V, both memberships re-verified.
std::pair<uint64_t, ClopenX> dense_witness_in_Am(
    const BasicOpen& v, const RepSet& E, uint64_t eq_budget = kDefaultEqBudget);

// The diagonal point of the selector-avoidance argument: alpha extends phi's
// first cylinder word t1 and then escapes every selector block along E.
DiagonalReport diagonal_avoid_selector(const RepSet& E, const Selector& S,
                                       const ClopenX& phi, uint64_t depth);

// Full pipeline: diagonal point plus the ideal-membership clause making
// (alpha, p1) a legal subbasic point separating phi from the selector range.
Certificate xI_not_qplus(const IdealHandle& ideal, const RepSet& E,
                         const ClopenX& phi, const Selector& S, uint64_t depth);

// phi in D(A): phi empty, or every cylinder word has a zero bit at a
// position in A.
bool D_membership(const RepSet& A, const ClopenX& phi);

// Trichotomy driver: density probing when A is ideal-positive; nowhere
// density plus the exact closedness clause when A is in the ideal.
Certificate D_status(const RepSet& A, const IdealHandle& ideal,
                     const ProbeFamily& probes);

// The B = union of A_n intersect [0, q_n] construction, with the exact
// (beta, m)+ avoidance check over all listed indices and levels m < M.
Certificate xinoSS_certificate(const IdealHandle& ideal,
                               const std::vector<RepSet>& A,
                               const std::vector<std::vector<uint64_t>>& K,
                               uint64_t M);

// The fixed converging sequence x_n = [0^n 1] x {0}.
ClopenX x_seq(uint64_t n);

struct ConvergeResult {
  uint64_t N = 0;       // derived entry bound
  uint64_t n_star = 0;  // minimal entry bound confirmed by scan
};
// Entry bound into an all-negative neighborhood of the empty set.
ConvergeResult converging_sequence(const BasicOpen& v,
                                   uint64_t eq_budget = kDefaultEqBudget);

// Exact check of F = intersection over m < M of {n < N : psi_n in (chi_F, m)+},
// with per-n exit witnesses for n outside F.
Certificate closed_discrete_check(const IdealHandle& ideal, const RepSet& F,
                                  uint64_t M, uint64_t N);

struct GammaResult {
  std::set<uint64_t> A;  // exceptional indices inside alpha's support
  Certificate cert;
};
// Gamma decomposition: O = ((alpha, p)+ in the psi-copy) minus A-hat, with
// the membership equivalence verified for all n < bound.
GammaResult gamma_preimage(const PointB& alpha, uint64_t p, uint64_t bound);

// Accumulation evidence at psi_l: the set {n in A : phi_n in V} as a scanned
// prefix plus the ideal tri-state of its downward closure.
Certificate accumulation_check(const RepSet& A, uint64_t l, const BasicOpen& v,
                               uint64_t bound, const IdealHandle& ideal);

// Tall-ideal thinning chained into a closed-discrete certificate: B-hat is
// closed discrete, so A-hat cannot converge.
std::pair<RepSet, Certificate> no_convergence_witness(const IdealHandle& ideal,
                                                      const RepSet& A,
                                                      uint64_t M = 8,
                                                      uint64_t N = 400);

struct YnotqResult {
  RepSet L;                      // indices outside every A_m block
  RepSet L_prime;                // infinite thinning of L inside the ideal
  std::vector<uint64_t> m_k;     // block indices, the first k_max of L'
  std::vector<ClopenX> selector; // chosen member of each block A_{m_k}
  PointB alpha;
  Certificate cert;
};
// The q+ failure pipeline for Y over a tall ideal: alpha separates psi_q
// from the selector while staying ideal-legal.
YnotqResult y_not_qplus(const IdealHandle& ideal, const Bounds& bounds,
                        uint64_t k_max = 200);

// Bounded-evidence pipeline for the wSS failure at the star levels.
Certificate yknoss_pipeline(const IdealHandle& ideal, const IdealTower& tower,
                            uint64_t n_max, const ProbeFamily& probes);

}  // namespace cforge
