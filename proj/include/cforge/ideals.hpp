#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cforge/common.hpp"
#include "cforge/point.hpp"

namespace cforge {

// A named ideal on N with tri-state membership over representable sets.
// Membership is exact on the structured RepSet kinds and Unknown outside the
// decidable fragment; an ideal never guesses.
struct IdealHandle {
  std::string name;
  std::function<TriState(const RepSet&)> member;
  bool is_tall = false;
  bool has_thin = false;
  bool has_witness = false;

  // Deterministic infinite thinning of an infinite set E into the ideal:
  // the first `head` enumerated elements plus those at power-of-two
  // positions.  Requires is_tall.
  RepSet thin_subset(const RepSet& E, uint64_t head = 1) const;

  // Witness that the ideal is not p+: sets A_n outside the ideal whose
  // finite selections always union into the ideal.  Requires has_witness.
  RepSet non_pplus_witness(uint64_t n) const;
};

// name in {fin, empty-x-fin, fin-x-empty, density-zero, power-set}.
IdealHandle builtin_ideal(const std::string& name);

// Probe/refinement budgets shared by the bounded verifiers.
struct Bounds {
  uint64_t max_constraints = 4;
  uint64_t max_level = 4;  // levels < max_level
  uint64_t word_depth = 8;
  uint64_t index_bound = 50000;
  uint64_t eq_budget = kDefaultEqBudget;
  uint64_t probe_count = 50;
  uint64_t refinement_count = 24;

  Json to_json() const;
  static Bounds from_json(const Json& j);
};

struct Certificate;
struct ProbeFamily;

// The star of an ideal: index sets F whose phi-copy is nowhere dense in
// X(base).  star membership is a bounded semidecision, never complete.
class StarIdeal {
 public:
  StarIdeal(IdealHandle base, Bounds budget);
  StarIdeal(std::shared_ptr<const StarIdeal> base, Bounds budget);

  // Name of the ideal whose points parameterize the probe topology.
  const std::string& base_point_ideal() const { return point_ideal_; }
  const Bounds& budget() const { return budget_; }
  int depth() const { return depth_; }  // 1 for I*, 2 for I**, ...

 private:
  std::string point_ideal_;
  Bounds budget_;
  int depth_;
};

// F is given as a decidable index predicate together with an optional RepSet
// view used in evidence.
struct IndexSet {
  std::function<TriState(uint64_t)> pred;
  std::string desc;
  std::optional<RepSet> view;

  static IndexSet of(const RepSet& r, std::string desc);
  static IndexSet all();
  static IndexSet none();
};

std::pair<TriState, Certificate> star_member(const StarIdeal& star,
                                             const IndexSet& F,
                                             const ProbeFamily& probes);

// The tower I^0 = full power set, I^k = (I^{k-1})^star.
class IdealTower {
 public:
  explicit IdealTower(Bounds budget);
  // Bounded star membership at level k >= 1 (level 0 is always Yes).
  std::pair<TriState, Certificate> member(int level, const IndexSet& F,
                                          const ProbeFamily& probes) const;
  const StarIdeal& star_at(int level) const;  // level >= 1

 private:
  std::vector<std::shared_ptr<const StarIdeal>> stars_;
};

}  // namespace cforge
