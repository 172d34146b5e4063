#include "cforge/topology.hpp"

#include <algorithm>
#include <random>

#include "cforge/enumeration.hpp"

namespace cforge {

BasicOpen& BasicOpen::add(bool positive, PointB point, uint64_t level) {
  auto& side = positive ? positives : negatives;
  side.push_back(SubbasicConstraint{positive, std::move(point), level});
  return *this;
}

std::vector<const SubbasicConstraint*> BasicOpen::all() const {
  std::vector<const SubbasicConstraint*> r;
  for (const auto& c : positives) r.push_back(&c);
  for (const auto& c : negatives) r.push_back(&c);
  return r;
}

Json BasicOpen::to_json() const {
  Json constraints = Json::array();
  for (const auto* c : all())
    constraints.push_back(Json{{"sign", c->positive ? "+" : "-"},
                               {"point", c->point.to_json()},
                               {"level", c->level}});
  return Json{{"ideal", ideal_tag}, {"constraints", constraints}};
}

BasicOpen BasicOpen::from_json(const Json& j) {
  BasicOpen v;
  v.ideal_tag = j.at("ideal").get<std::string>();
  for (const auto& c : j.at("constraints"))
    v.add(c.at("sign").get<std::string>() == "+",
          PointB::from_json(c.at("point")), c.at("level").get<uint64_t>());
  return v;
}

const char* Certificate::kind_name(Kind k) {
  switch (k) {
    case Kind::Verified: return "verified";
    case Kind::Refuted: return "refuted";
    default: return "exhausted";
  }
}

int Certificate::exit_code() const {
  switch (kind) {
    case Kind::Verified: return 0;
    case Kind::Refuted: return 1;
    default: return 2;
  }
}

Json Certificate::to_json() const {
  return Json{{"schema", kCertSchema},
              {"status", kind_name(kind)},
              {"provenance", provenance},
              {"evidence", evidence}};
}

Certificate Certificate::from_json(const Json& j) {
  Certificate c;
  const std::string s = j.at("status").get<std::string>();
  c.kind = s == "verified"  ? Kind::Verified
           : s == "refuted" ? Kind::Refuted
                            : Kind::Exhausted;
  c.provenance = j.at("provenance");
  c.evidence = j.at("evidence");
  return c;
}

Json make_provenance(const std::string& ideal, uint64_t seed, const Bounds& b) {
  return Json{{"artifact", kArtifactVersion},
              {"pairing", kPairingVersion},
              {"enumeration", kEnumerationVersion},
              {"ideal", ideal},
              {"seed", seed},
              {"bounds", b.to_json()}};
}

NonemptyResult basic_nonempty(const BasicOpen& v, uint64_t eq_budget) {
  // V is empty exactly when a positive pair coincides with a negative pair:
  // otherwise a clopen set realizing the signs exists (see find_X_member).
  NonemptyResult r;
  for (size_t i = 0; i < v.positives.size(); ++i) {
    for (size_t j = 0; j < v.negatives.size(); ++j) {
      if (v.positives[i].level != v.negatives[j].level) continue;
      TriState eq =
          point_equal(v.positives[i].point, v.negatives[j].point, eq_budget);
      if (eq == TriState::Yes) {
        r.state = TriState::No;
        r.clash = {i, j};
        return r;
      }
      if (eq == TriState::Unknown) r.state = TriState::Unknown;
    }
  }
  return r;
}

bool member_basic(const ClopenX& theta, const BasicOpen& v) {
  for (const auto& c : v.positives)
    if (!contains_point(theta, c.point, c.level)) return false;
  for (const auto& c : v.negatives)
    if (contains_point(theta, c.point, c.level)) return false;
  return true;
}

bool member_basic_psi(uint64_t n, const BasicOpen& v) {
  for (const auto& c : v.positives)
    if (!enumeration::psi_eval(n, c.point, c.level)) return false;
  for (const auto& c : v.negatives)
    if (enumeration::psi_eval(n, c.point, c.level)) return false;
  return true;
}

Certificate symdiff_bound_check(const BasicOpen& v, uint64_t n_bound,
                                const Json& provenance) {
  // psi_n and phi_n can only disagree on a constraint (alpha, p) when
  // alpha(n) = 1, so every membership discrepancy at index n must be covered
  // by some constraint point with bit 1 at n.
  Certificate cert;
  cert.provenance = provenance;
  cert.provenance["n_bound"] = n_bound;
  Json recorded = Json::array();
  uint64_t discrepancies = 0;
  for (uint64_t n = 0; n < n_bound; ++n) {
    bool phi_in = member_basic(enumeration::unrank(n), v);
    bool psi_in = member_basic_psi(n, v);
    if (phi_in == psi_in) continue;
    ++discrepancies;
    // phi in, psi out: a negative point must carry bit 1 at n; the dual
    // discrepancy needs a positive point.
    const auto& side = phi_in ? v.negatives : v.positives;
    const PointB* covering = nullptr;
    for (const auto& c : side)
      if (c.point(n)) {
        covering = &c.point;
        break;
      }
    if (!covering) {
      cert.kind = Certificate::Kind::Refuted;
      cert.evidence.push_back(Json{{"check", "symdiff_uncovered"},
                                   {"n", n},
                                   {"phi_in", phi_in},
                                   {"psi_in", psi_in},
                                   {"V", v.to_json()}});
      return cert;
    }
    if (recorded.size() < 32 && covering->serializable())
      recorded.push_back(Json{{"check", "bit"},
                              {"point", covering->to_json()},
                              {"n", n},
                              {"expect", true}});
  }
  cert.kind = Certificate::Kind::Verified;
  cert.evidence.push_back(Json{{"check", "symdiff_covered"},
                               {"n_bound", n_bound},
                               {"discrepancies", discrepancies},
                               {"covered_samples", recorded}});
  return cert;
}

std::pair<BasicOpen, BasicOpen> split_basic(const BasicOpen& v,
                                            const IdealHandle& j) {
  BasicOpen w, u;
  w.ideal_tag = j.name;
  u.ideal_tag = v.ideal_tag;
  for (const auto* c : v.all()) {
    bool in_j = c->point.ones_view() &&
                j.member(*c->point.ones_view()) == TriState::Yes;
    (in_j ? w : u).add(c->positive, c->point, c->level);
  }
  return {std::move(w), std::move(u)};
}

ClopenX find_X_member(const BasicOpen& v, uint64_t eq_budget) {
  if (v.positives.empty()) {
    // The empty clopen set avoids every negative pair.
    if (!member_basic(ClopenX(), v))
      throw CforgeError("find_X_member: internal re-verification failed");
    return ClopenX();
  }
  // Prefix length long enough to separate each positive point from each
  // negative point at the same level.
  uint64_t len = 1;
  for (const auto& p : v.positives)
    for (const auto& n : v.negatives) {
      if (p.level != n.level) continue;
      auto d = first_difference(p.point, n.point, eq_budget);
      if (!d)
        throw CforgeError(
            "find_X_member: cannot separate a positive from a negative "
            "constraint within the equality budget");
      len = std::max(len, *d + 1);
    }
  std::vector<Cylinder> cyls;
  for (const auto& p : v.positives)
    cyls.push_back(Cylinder{p.level, p.point.prefix(len)});
  ClopenX theta = ClopenX::canonicalize(cyls);
  if (!member_basic(theta, v))
    throw CforgeError("find_X_member: re-verification failed");
  return theta;
}

std::optional<uint64_t> find_Y_member(const BasicOpen& v, uint64_t bound) {
  for (uint64_t n = 0; n < bound; ++n)
    if (member_basic_psi(n, v)) return n;
  return std::nullopt;
}

namespace {

// Support span for pool points.  The materialized enumeration only reaches
// cylinder words of length 4, so probe points separated inside [0, 4) keep
// bounded index scans able to witness membership.
constexpr uint64_t kPoolSpan = 4;

// Deterministic pool of points legal in the named ideal.
std::vector<PointB> build_pool(const std::string& ideal_name, uint64_t seed,
                               const Bounds& b) {
  (void)seed;
  std::vector<PointB> pool;
  // Finite-support points are legal in every ideal.  Every point keeps a zero
  // at some even and some odd position below the pool span, so a positive
  // constraint never forces word prefixes that lock out entire parity classes
  // from the short-word index range the bounded scans can reach.
  const std::vector<std::set<uint64_t>> finite_supports = {
      {}, {0}, {1}, {2}, {3}, {0, 1}, {0, 3}, {1, 2}, {2, 3}};
  for (const auto& s : finite_supports) pool.push_back(PointB(RepSet::finite(s)));

  if (ideal_name == "empty-x-fin") {
    // Rows {pair(i, k) : i} meet every column at most once.
    for (uint64_t k = 0; k < 2; ++k)
      pool.push_back(PointB(RepSet::fiber(RepSet::Axis::Second, k)));
  } else if (ideal_name == "fin-x-empty") {
    // A single column is one nonempty fiber.
    for (uint64_t k = 0; k < 2; ++k)
      pool.push_back(PointB(RepSet::fiber(RepSet::Axis::First, k)));
  } else if (ideal_name == "density-zero") {
    pool.push_back(PointB(RepSet::sparse(0, 1)));
    pool.push_back(PointB(RepSet::sparse(1, 1)));
  } else if (ideal_name == "power-set") {
    pool.push_back(PointB(RepSet::periodic("", "10")));
    pool.push_back(PointB(RepSet::periodic("", "110")));
  }
  (void)b;
  return pool;
}

// At most one positive constraint: basic opens with several positives at
// distinct levels have no small-index members, which would starve the
// bounded density scans of witnesses.
BasicOpen random_basic(const std::string& ideal_name,
                       const std::vector<PointB>& pool, std::mt19937_64& rng,
                       const Bounds& b) {
  BasicOpen v;
  v.ideal_tag = ideal_name;
  bool with_positive = rng() % 2 == 0;
  if (with_positive)
    v.add(true, pool[rng() % pool.size()], rng() % b.max_level);
  uint64_t negatives = 1 + rng() % (b.max_constraints - 1);
  for (uint64_t i = 0; i < negatives; ++i)
    v.add(false, pool[rng() % pool.size()], rng() % b.max_level);
  return v;
}

}  // namespace

std::vector<PointB> ProbeFamily::point_pool() const {
  return build_pool(ideal_name, seed, bounds);
}

std::vector<BasicOpen> ProbeFamily::refinements(const BasicOpen& v) const {
  // Candidates deterministic in (family seed, V): V narrowed by one or two
  // extra negative constraints; only candidates not provably empty survive.
  std::mt19937_64 rng(seed ^ std::hash<std::string>{}(v.to_json().dump()));
  auto pool = point_pool();
  std::vector<BasicOpen> out;
  uint64_t attempts = 0;
  while (out.size() < bounds.refinement_count &&
         attempts < 8 * bounds.refinement_count) {
    ++attempts;
    BasicOpen w = v;
    uint64_t extra = 1 + rng() % 2;
    for (uint64_t i = 0; i < extra; ++i)
      w.add(false, pool[rng() % pool.size()], rng() % bounds.max_level);
    if (basic_nonempty(w, bounds.eq_budget).state == TriState::No) continue;
    out.push_back(std::move(w));
  }
  return out;
}

ProbeFamily make_probe_family(const std::string& ideal_name, uint64_t seed,
                              const Bounds& bounds) {
  ProbeFamily f;
  f.ideal_name = ideal_name;
  f.seed = seed;
  f.bounds = bounds;
  std::mt19937_64 rng(seed);
  auto pool = build_pool(ideal_name, seed, bounds);
  uint64_t attempts = 0;
  while (f.probes.size() < bounds.probe_count &&
         attempts < 8 * bounds.probe_count) {
    ++attempts;
    BasicOpen v = random_basic(ideal_name, pool, rng, bounds);
    if (basic_nonempty(v, bounds.eq_budget).state == TriState::No) continue;
    f.probes.push_back(std::move(v));
  }
  return f;
}

namespace {

// Definite target hits and unknown indices within the bound.
struct TargetScan {
  std::vector<uint64_t> members;
  bool unknown_seen = false;
};

TargetScan scan_target(const ProbeTarget& target, uint64_t bound) {
  TargetScan s;
  for (uint64_t n = 0; n < bound; ++n) {
    TriState t = target.indices.pred(n);
    if (t == TriState::Yes) s.members.push_back(n);
    else if (t == TriState::Unknown) s.unknown_seen = true;
  }
  return s;
}

bool copy_member(const ProbeTarget& target, uint64_t n, const BasicOpen& v) {
  return target.copy == ProbeTarget::Copy::Phi
             ? member_basic(enumeration::unrank(n), v)
             : member_basic_psi(n, v);
}

Json copy_evidence(const ProbeTarget& target, uint64_t n, const BasicOpen& v) {
  Json e{{"check", target.copy == ProbeTarget::Copy::Phi ? "member_basic"
                                                         : "psi_member"},
         {"n", n},
         {"phi", enumeration::unrank(n).to_json()},
         {"V", v.to_json()},
         {"expect", true}};
  return e;
}

}  // namespace

Certificate density_probe(const ProbeTarget& target, const IdealHandle& ideal,
                          const ProbeFamily& probes) {
  Certificate cert;
  cert.provenance = make_provenance(ideal.name, probes.seed, probes.bounds);
  cert.provenance["target"] = target.indices.desc;
  cert.provenance["copy"] =
      target.copy == ProbeTarget::Copy::Phi ? "phi" : "psi";
  TargetScan scan = scan_target(target, probes.bounds.index_bound);
  for (size_t i = 0; i < probes.probes.size(); ++i) {
    const BasicOpen& v = probes.probes[i];
    std::optional<uint64_t> hit;
    for (uint64_t n : scan.members)
      if (copy_member(target, n, v)) {
        hit = n;
        break;
      }
    if (!hit) {
      cert.kind = Certificate::Kind::Exhausted;
      cert.evidence.push_back(Json{{"check", "no_member_found"},
                                   {"probe", i},
                                   {"V", v.to_json()},
                                   {"index_bound", probes.bounds.index_bound}});
      return cert;
    }
    Json e = copy_evidence(target, *hit, v);
    e["probe"] = i;
    cert.evidence.push_back(std::move(e));
  }
  cert.kind = Certificate::Kind::Verified;
  return cert;
}

Certificate nwd_probe(const ProbeTarget& target, const IdealHandle& ideal,
                      const ProbeFamily& probes,
                      const RefinementSuggestor& suggest) {
  Certificate cert;
  cert.provenance = make_provenance(ideal.name, probes.seed, probes.bounds);
  cert.provenance["target"] = target.indices.desc;
  cert.provenance["copy"] =
      target.copy == ProbeTarget::Copy::Phi ? "phi" : "psi";
  TargetScan scan = scan_target(target, probes.bounds.index_bound);
  for (size_t i = 0; i < probes.probes.size(); ++i) {
    const BasicOpen& v = probes.probes[i];
    std::vector<BasicOpen> candidates;
    if (suggest) candidates = suggest(v);
    auto generated = probes.refinements(v);
    candidates.insert(candidates.end(), generated.begin(), generated.end());

    bool avoided = false;
    for (const auto& w : candidates) {
      if (basic_nonempty(w, probes.bounds.eq_budget).state != TriState::Yes)
        continue;
      bool clean = !scan.unknown_seen;
      for (uint64_t n : scan.members)
        if (copy_member(target, n, w)) {
          clean = false;
          break;
        }
      if (clean) {
        cert.evidence.push_back(Json{{"check", "avoids"},
                                     {"probe", i},
                                     {"refinement", w.to_json()},
                                     {"index_bound", probes.bounds.index_bound}});
        avoided = true;
        break;
      }
    }
    if (!avoided) {
      cert.kind = Certificate::Kind::Exhausted;
      cert.evidence.push_back(Json{{"check", "no_avoiding_refinement"},
                                   {"probe", i},
                                   {"V", v.to_json()},
                                   {"candidates", candidates.size()}});
      return cert;
    }
  }
  cert.kind = Certificate::Kind::Verified;
  return cert;
}

}  // namespace cforge
