#include "cforge/ideals.hpp"

#include <algorithm>

#include "cforge/enumeration.hpp"
#include "cforge/pairing.hpp"
#include "cforge/topology.hpp"

namespace cforge {
namespace {

using K = RepSet::Kind;

TriState combine_union(const RepSet& r,
                       const std::function<TriState(const RepSet&)>& mem) {
  // An ideal is closed under finite unions and downward closed.
  bool all_yes = true;
  for (const auto& p : r.parts()) {
    TriState t = mem(p);
    if (t == TriState::No) return TriState::No;
    if (t != TriState::Yes) all_yes = false;
  }
  return all_yes ? TriState::Yes : TriState::Unknown;
}

// Shared skeleton: resolves Union / SubsetOf / Finite generically and
// delegates the rest to the per-ideal atom rule.
std::function<TriState(const RepSet&)> make_member(
    std::function<TriState(const RepSet&)> atom) {
  auto shared = std::make_shared<std::function<TriState(const RepSet&)>>();
  *shared = [atom, shared](const RepSet& r) -> TriState {
    switch (r.kind()) {
      case K::Finite:
        return TriState::Yes;  // every ideal contains all finite sets
      case K::Union:
        return combine_union(r, *shared);
      case K::SubsetOf:
        return (*shared)(r.parent()) == TriState::Yes ? TriState::Yes
                                                      : TriState::Unknown;
      case K::Periodic: {
        RepSet n = r.normalized();
        if (n.kind() != K::Periodic) return (*shared)(n);
        return atom(n);
      }
      default:
        return atom(r);
    }
  };
  return [shared](const RepSet& r) { return (*shared)(r); };
}

// Does some column {j : pair(i, j) in A} of an infinite eventually periodic
// set have infinitely many elements?  Decidable because pair(i, j) mod d
// depends only on (i mod 2d, j mod 2d).
bool some_column_infinite(const RepSet& periodic) {
  uint64_t d = periodic.period().size();
  uint64_t rho = periodic.prefix().size();
  for (uint64_t i0 = 0; i0 < 2 * d; ++i0) {
    for (uint64_t j0 = 0; j0 < 2 * d; ++j0) {
      // A representative of the class with value past the prefix region.
      uint64_t j = j0;
      while (pair(i0, j) < rho) j += 2 * d;
      if (periodic.contains(pair(i0, j))) return true;
    }
  }
  return false;
}

TriState thinned_under(const std::function<TriState(const RepSet&)>& mem,
                       const RepSet& r) {
  // A thinned set sits inside its parent.
  return mem(r.parent()) == TriState::Yes ? TriState::Yes : TriState::Unknown;
}

}  // namespace

RepSet IdealHandle::thin_subset(const RepSet& E, uint64_t head) const {
  if (!has_thin)
    throw CforgeError("ideal '" + name + "' is not tall: no thinning");
  if (E.surely_infinite() == TriState::No)
    throw CforgeError("thin_subset requires an infinite set");
  return RepSet::thinned(E, head);
}

RepSet IdealHandle::non_pplus_witness(uint64_t n) const {
  if (!has_witness)
    throw CforgeError("ideal '" + name + "' has no non-p+ witness");
  return RepSet::fiber(RepSet::Axis::First, n);
}

IdealHandle builtin_ideal(const std::string& name) {
  IdealHandle h;
  h.name = name;
  if (name == "fin") {
    h.member = make_member([mem = std::function<TriState(const RepSet&)>()](
                               const RepSet& r) mutable -> TriState {
      switch (r.kind()) {
        case K::Cofinite:
        case K::Sparse:
        case K::Fiber:
          return TriState::No;
        case K::Periodic:
          return TriState::No;  // normalized periodic is infinite
        case K::Thinned:
          return r.parent().surely_infinite() == TriState::Yes
                     ? TriState::No
                     : TriState::Unknown;
        default:
          return TriState::Unknown;
      }
    });
    return h;
  }
  if (name == "power-set") {
    h.member = [](const RepSet&) { return TriState::Yes; };
    h.is_tall = true;
    h.has_thin = true;
    return h;
  }
  if (name == "density-zero") {
    h.is_tall = true;
    h.has_thin = true;
    h.member = make_member([](const RepSet& r) -> TriState {
      switch (r.kind()) {
        case K::Cofinite:
          return TriState::No;
        case K::Periodic:
          return TriState::No;  // exact period average > 0
        case K::Sparse:
        case K::Fiber:
        case K::Thinned:
          // Counting functions O(log n) resp. O(sqrt n): upper density 0.
          return TriState::Yes;
        default:
          return TriState::Unknown;
      }
    });
    return h;
  }
  if (name == "empty-x-fin") {
    h.has_witness = true;
    auto member_ref = std::make_shared<std::function<TriState(const RepSet&)>>();
    h.member = make_member([member_ref](const RepSet& r) -> TriState {
      switch (r.kind()) {
        case K::Cofinite:
          return TriState::No;
        case K::Periodic:
          return some_column_infinite(r) ? TriState::No : TriState::Yes;
        case K::Fiber:
          // {pair(k, j) : j} is the k-th column (infinite); {pair(i, k) : i}
          // meets every column at most once.
          return r.axis() == RepSet::Axis::First ? TriState::No : TriState::Yes;
        case K::Thinned:
          return thinned_under(*member_ref, r);
        default:
          return TriState::Unknown;
      }
    });
    *member_ref = h.member;
    return h;
  }
  if (name == "fin-x-empty") {
    auto member_ref = std::make_shared<std::function<TriState(const RepSet&)>>();
    h.member = make_member([member_ref](const RepSet& r) -> TriState {
      switch (r.kind()) {
        case K::Cofinite:
          return TriState::No;
        case K::Periodic:
          // Finitely many columns have counting O(sqrt n); an infinite
          // periodic set has positive density.
          return TriState::No;
        case K::Fiber:
          return r.axis() == RepSet::Axis::First ? TriState::Yes : TriState::No;
        case K::Thinned:
          return thinned_under(*member_ref, r);
        default:
          return TriState::Unknown;
      }
    });
    *member_ref = h.member;
    return h;
  }
  throw CforgeError("unknown ideal: " + name);
}

Json Bounds::to_json() const {
  return Json{{"max_constraints", max_constraints}, {"max_level", max_level},
              {"word_depth", word_depth},           {"index_bound", index_bound},
              {"eq_budget", eq_budget},             {"probe_count", probe_count},
              {"refinement_count", refinement_count}};
}

Bounds Bounds::from_json(const Json& j) {
  Bounds b;
  if (j.contains("max_constraints")) b.max_constraints = j["max_constraints"];
  if (j.contains("max_level")) b.max_level = j["max_level"];
  if (j.contains("word_depth")) b.word_depth = j["word_depth"];
  if (j.contains("index_bound")) b.index_bound = j["index_bound"];
  if (j.contains("eq_budget")) b.eq_budget = j["eq_budget"];
  if (j.contains("probe_count")) b.probe_count = j["probe_count"];
  if (j.contains("refinement_count")) b.refinement_count = j["refinement_count"];
  return b;
}

IndexSet IndexSet::of(const RepSet& r, std::string desc) {
  IndexSet s;
  s.pred = [r](uint64_t n) {
    return r.contains(n) ? TriState::Yes : TriState::No;
  };
  s.desc = std::move(desc);
  s.view = r;
  return s;
}

IndexSet IndexSet::all() {
  IndexSet s;
  s.pred = [](uint64_t) { return TriState::Yes; };
  s.desc = "all";
  return s;
}

IndexSet IndexSet::none() {
  IndexSet s;
  s.pred = [](uint64_t) { return TriState::No; };
  s.desc = "none";
  return s;
}

StarIdeal::StarIdeal(IdealHandle base, Bounds budget)
    : point_ideal_(base.name), budget_(budget), depth_(1) {}

StarIdeal::StarIdeal(std::shared_ptr<const StarIdeal> base, Bounds budget)
    : point_ideal_(base->point_ideal_), budget_(budget),
      depth_(base->depth_ + 1) {}

std::pair<TriState, Certificate> star_member(const StarIdeal& star,
                                             const IndexSet& F,
                                             const ProbeFamily& probes) {
  const Bounds& b = star.budget();
  Certificate cert;
  cert.provenance = make_provenance(
      "star^" + std::to_string(star.depth()) + "(" + star.base_point_ideal() + ")",
      probes.seed, b);
  cert.provenance["target"] = F.desc;

  // Definite target members within the index bound, with their clopens.
  std::vector<std::pair<uint64_t, ClopenX>> members;
  bool unknown_seen = false;
  for (uint64_t n = 0; n < b.index_bound; ++n) {
    TriState t = F.pred(n);
    if (t == TriState::Yes) members.emplace_back(n, enumeration::unrank(n));
    else if (t == TriState::Unknown) unknown_seen = true;
  }

  bool all_avoided = true;
  std::optional<size_t> dense_probe;
  for (size_t pi = 0; pi < probes.probes.size(); ++pi) {
    const BasicOpen& v = probes.probes[pi];
    std::vector<BasicOpen> candidates{v};
    auto refs = probes.refinements(v);
    candidates.insert(candidates.end(), refs.begin(), refs.end());

    bool avoided = false;
    Json fail_witnesses = Json::array();
    for (const auto& w : candidates) {
      if (basic_nonempty(w, b.eq_budget).state != TriState::Yes) continue;
      std::optional<uint64_t> hit;
      for (const auto& [n, phi] : members) {
        if (member_basic(phi, w)) {
          hit = n;
          break;
        }
      }
      if (!hit && !unknown_seen) {
        cert.evidence.push_back(Json{{"check", "avoids"},
                                     {"probe", pi},
                                     {"refinement", w.to_json()},
                                     {"index_bound", b.index_bound}});
        avoided = true;
        break;
      }
      if (hit)
        fail_witnesses.push_back(Json{{"check", "member_basic"},
                                      {"n", *hit},
                                      {"phi", enumeration::unrank(*hit).to_json()},
                                      {"V", w.to_json()},
                                      {"expect", true}});
    }
    if (!avoided) {
      all_avoided = false;
      if (!unknown_seen && !dense_probe) {
        dense_probe = pi;
        cert.evidence.push_back(Json{{"check", "dense_in"},
                                     {"probe", pi},
                                     {"V", v.to_json()},
                                     {"witnesses", fail_witnesses}});
      }
    }
  }

  if (all_avoided) {
    cert.kind = Certificate::Kind::Verified;
    return {TriState::Yes, cert};
  }
  if (dense_probe) {
    cert.kind = Certificate::Kind::Refuted;
    return {TriState::No, cert};
  }
  cert.kind = Certificate::Kind::Exhausted;
  return {TriState::Unknown, cert};
}

IdealTower::IdealTower(Bounds budget) {
  auto level1 = std::make_shared<const StarIdeal>(builtin_ideal("power-set"), budget);
  stars_.push_back(level1);
  for (int k = 2; k <= 4; ++k)
    stars_.push_back(std::make_shared<const StarIdeal>(stars_.back(), budget));
}

const StarIdeal& IdealTower::star_at(int level) const {
  if (level < 1 || level > static_cast<int>(stars_.size()))
    throw CforgeError("tower level out of range");
  return *stars_[level - 1];
}

std::pair<TriState, Certificate> IdealTower::member(
    int level, const IndexSet& F, const ProbeFamily& probes) const {
  if (level == 0) {
    Certificate cert;
    cert.kind = Certificate::Kind::Verified;
    cert.provenance = Json{{"ideal", "power-set"}, {"level", 0}};
    cert.evidence.push_back(Json{{"check", "trivial"}, {"note", "I^0 is the full power set"}});
    return {TriState::Yes, cert};
  }
  return star_member(star_at(level), F, probes);
}

}  // namespace cforge
