#include "cforge/finite_space.hpp"

#include <algorithm>

namespace cforge {

FiniteSpace FiniteSpace::create(int n, std::vector<uint32_t> opens) {
  if (n < 0 || n > 12) throw CforgeError("FiniteSpace: 0 <= n <= 12 required");
  FiniteSpace x;
  x.n_ = n;
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  x.opens_ = std::move(opens);
  uint32_t full = x.full();
  if (!x.is_open(0) || !x.is_open(full))
    throw CforgeError("FiniteSpace: missing empty or full set");
  for (uint32_t a : x.opens_)
    for (uint32_t b : x.opens_)
      if (!x.is_open(a | b) || !x.is_open(a & b))
        throw CforgeError("FiniteSpace: not closed under union/intersection");
  return x;
}

FiniteSpace FiniteSpace::discrete(int n) {
  std::vector<uint32_t> opens;
  for (uint32_t m = 0; m < (uint32_t{1} << n); ++m) opens.push_back(m);
  return create(n, std::move(opens));
}

FiniteSpace FiniteSpace::indiscrete(int n) {
  return create(n, {0, (uint32_t{1} << n) - 1});
}

bool FiniteSpace::is_open(uint32_t mask) const {
  return std::binary_search(opens_.begin(), opens_.end(), mask);
}

uint32_t FiniteSpace::interior(uint32_t mask) const {
  uint32_t in = 0;
  for (uint32_t v : opens_)
    if ((v & ~mask) == 0) in |= v;
  return in;
}

uint32_t FiniteSpace::closure(uint32_t mask) const {
  return full() & ~interior(full() & ~mask);
}

bool FiniteSpace::is_dense(uint32_t mask) const {
  return closure(mask) == full();
}

bool FiniteSpace::is_nwd(uint32_t mask) const {
  return interior(closure(mask)) == 0;
}

FiniteSpace tau_alpha(const FiniteSpace& x) {
  std::vector<uint32_t> nwd;
  for (uint32_t m = 0; m <= x.full(); ++m)
    if (x.is_nwd(m)) nwd.push_back(m);
  std::vector<uint32_t> opens;
  for (uint32_t v : x.opens())
    for (uint32_t n : nwd) opens.push_back(v & ~n);
  // create() validates; this family is provably already a topology, so a
  // throw here would falsify the construction.
  return FiniteSpace::create(x.points(), std::move(opens));
}

Certificate check_tau_alpha_identities(const FiniteSpace& x) {
  Certificate cert;
  cert.provenance = Json{{"artifact", kArtifactVersion},
                         {"points", x.points()},
                         {"opens", x.opens().size()}};
  FiniteSpace xa = tau_alpha(x);
  bool ok = true;
  auto fail = [&](const char* what, uint32_t mask) {
    ok = false;
    cert.evidence.push_back(
        Json{{"check", "note"}, {"identity", what}, {"mask", mask}});
  };

  for (uint32_t v = 0; v <= x.full(); ++v) {
    // (i) V open in tau^alpha iff V inside int cl int V (all in tau).
    bool lhs = xa.is_open(v);
    bool rhs = (v & ~x.interior(x.closure(x.interior(v)))) == 0;
    if (lhs != rhs) fail("interior-characterization", v);
    // (iv) density transfers both ways.
    if (x.is_dense(v) != xa.is_dense(v)) fail("density-equivalence", v);
    // (iii) nodec: tau^alpha-nwd sets are tau^alpha-closed.
    if (xa.is_nwd(v) && !xa.is_closed(v)) fail("nodec", v);
    // (ii) closure of A at points outside A.
    for (int p = 0; p < x.points(); ++p) {
      uint32_t bit = uint32_t{1} << p;
      if (v & bit) continue;
      bool in_cl = (xa.closure(v) & bit) != 0;
      bool formula = (x.closure(x.interior(x.closure(v))) & bit) != 0;
      if (in_cl != formula) fail("closure-formula", v);
    }
  }
  // tau refines into tau^alpha.
  for (uint32_t v : x.opens())
    if (!xa.is_open(v)) fail("tau-subset", v);

  cert.evidence.push_back(Json{{"check", "note"},
                               {"subsets_checked", x.full() + 1},
                               {"tau_alpha_opens", xa.opens().size()}});
  cert.kind = ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  return cert;
}

std::vector<FiniteSpace> enumerate_topologies(int n) {
  if (n < 1 || n > 4) throw CforgeError("enumerate_topologies: 1 <= n <= 4");
  uint32_t full = (uint32_t{1} << n) - 1;
  uint32_t masks = uint32_t{1} << n;  // number of subsets of the ground set
  std::vector<FiniteSpace> out;
  // A family is a subset of the 2^n masks: brute force all 2^(2^n) of them.
  for (uint64_t fam = 0; fam < (uint64_t{1} << masks); ++fam) {
    if (!(fam & 1) || !(fam >> full & 1)) continue;  // need empty and full
    std::vector<uint32_t> opens;
    for (uint32_t m = 0; m < masks; ++m)
      if (fam >> m & 1) opens.push_back(m);
    bool closed = true;
    for (size_t i = 0; i < opens.size() && closed; ++i)
      for (size_t j = i + 1; j < opens.size() && closed; ++j)
        closed = (fam >> (opens[i] | opens[j]) & 1) &&
                 (fam >> (opens[i] & opens[j]) & 1);
    if (closed) out.push_back(FiniteSpace::create(n, std::move(opens)));
  }
  return out;
}

uint64_t count_preorders(int n) {
  // Reflexive transitive relations as n x n bit matrices (rows as bitmasks).
  if (n < 1 || n > 4) throw CforgeError("count_preorders: 1 <= n <= 4");
  int off = n * (n - 1);  // free off-diagonal bits
  uint64_t count = 0;
  for (uint64_t rel = 0; rel < (uint64_t{1} << off); ++rel) {
    uint32_t row[4] = {0, 0, 0, 0};
    int bit = 0;
    for (int i = 0; i < n; ++i) {
      row[i] |= uint32_t{1} << i;  // reflexive
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        if (rel >> bit++ & 1) row[i] |= uint32_t{1} << j;
      }
    }
    bool transitive = true;
    for (int i = 0; i < n && transitive; ++i)
      for (int j = 0; j < n && transitive; ++j)
        if (row[i] >> j & 1)
          transitive = (row[j] & ~row[i]) == 0;
    if (transitive) ++count;
  }
  return count;
}

}  // namespace cforge
