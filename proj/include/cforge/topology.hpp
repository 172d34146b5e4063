#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cforge/clopen.hpp"
#include "cforge/common.hpp"
#include "cforge/ideals.hpp"
#include "cforge/point.hpp"

namespace cforge {

// One signed subbasic constraint (alpha, p)^+ / (alpha, p)^-.
struct SubbasicConstraint {
  bool positive = true;
  PointB point;
  uint64_t level = 0;
};

// A basic rho_I-open set: a finite conjunction of signed constraints whose
// points come from the tagged ideal.
struct BasicOpen {
  std::vector<SubbasicConstraint> positives;
  std::vector<SubbasicConstraint> negatives;
  std::string ideal_tag;

  BasicOpen& add(bool positive, PointB point, uint64_t level);
  std::vector<const SubbasicConstraint*> all() const;

  Json to_json() const;
  static BasicOpen from_json(const Json& j);
};

// Replayable outcome of a bounded verification.
struct Certificate {
  enum class Kind { Verified, Refuted, Exhausted };
  Kind kind = Kind::Exhausted;
  Json evidence = Json::array();
  Json provenance = Json::object();

  Json to_json() const;
  static Certificate from_json(const Json& j);
  static const char* kind_name(Kind k);
  int exit_code() const;
};

Json make_provenance(const std::string& ideal, uint64_t seed, const Bounds& b);

// Nonemptiness of a basic open: no positive pair equals a negative pair.
// Exhausted when a pair of opaque points agrees through the equality budget.
struct NonemptyResult {
  TriState state = TriState::Yes;
  std::optional<std::pair<size_t, size_t>> clash;  // (pos idx, neg idx)
};
NonemptyResult basic_nonempty(const BasicOpen& v,
                              uint64_t eq_budget = kDefaultEqBudget);

// Membership of a clopen set / of psi_n in a basic open.
bool member_basic(const ClopenX& theta, const BasicOpen& v);
bool member_basic_psi(uint64_t n, const BasicOpen& v);

// Exhaustive per-n check of the index symmetric-difference containments for
// n < N: a phi/psi discrepancy at n forces a constraint point with bit 1 at n.
Certificate symdiff_bound_check(const BasicOpen& v, uint64_t n_bound,
                                const Json& provenance);

// Splits V into (W over points in J, U over the rest); either side may be
// the full space (empty constraint set).
std::pair<BasicOpen, BasicOpen> split_basic(const BasicOpen& v,
                                            const IdealHandle& j);

// A member of X inside V, built from constraint-point prefixes and
// re-verified before returning.
ClopenX find_X_member(const BasicOpen& v, uint64_t eq_budget = kDefaultEqBudget);

// Least n < bound with psi_n in V.
std::optional<uint64_t> find_Y_member(const BasicOpen& v, uint64_t bound);

// Deterministic seeded family of basic opens over an ideal's legal points,
// with a refinement generator.  Generation is a pure function of
// (seed, bounds, ideal name).
struct ProbeFamily {
  std::string ideal_name;
  uint64_t seed = 0;
  Bounds bounds;
  std::vector<BasicOpen> probes;

  std::vector<BasicOpen> refinements(const BasicOpen& v) const;
  std::vector<PointB> point_pool() const;
};

ProbeFamily make_probe_family(const std::string& ideal_name, uint64_t seed,
                              const Bounds& bounds);

// Index-set target for the bounded density / nowhere-density verifiers,
// read through the phi- or psi-copy.
struct ProbeTarget {
  IndexSet indices;
  enum class Copy { Phi, Psi } copy = Copy::Phi;
};

// Density: Verified iff every probe contains a target member within the
// index bound; absence yields Exhausted, never Refuted.
Certificate density_probe(const ProbeTarget& target, const IdealHandle& ideal,
                          const ProbeFamily& probes);

// Nowhere density: Verified iff every probe has a refinement avoiding the
// target up to the index bound.  `suggest` may contribute construction-aware
// refinements (checked like any other candidate).
using RefinementSuggestor =
    std::function<std::vector<BasicOpen>(const BasicOpen&)>;
Certificate nwd_probe(const ProbeTarget& target, const IdealHandle& ideal,
                      const ProbeFamily& probes,
                      const RefinementSuggestor& suggest = nullptr);

}  // namespace cforge
