#include "cforge/constructions.hpp"

#include <algorithm>
#include <map>

#include "cforge/enumeration.hpp"

namespace cforge {
namespace {

uint64_t max_level(const BasicOpen& v) {
  uint64_t m = 0;
  for (const auto* c : v.all()) m = std::max(m, c->level);
  return m;
}

bool uniform_block(const ClopenX& phi, uint64_t& m_out) {
  // phi in A_m for the unique m = word length - 1, if any.
  if (phi.empty()) return false;
  size_t len = phi.cylinders().front().word.size();
  if (len == 0) return false;
  for (const auto& c : phi.cylinders())
    if (c.word.size() != len || c.level > len - 1) return false;
  // The word restrictions to length m must be pairwise distinct across the
  // whole union, not merely within each level.
  for (size_t i = 0; i < phi.cylinders().size(); ++i)
    for (size_t j = i + 1; j < phi.cylinders().size(); ++j)
      if (phi.cylinders()[i].word.compare(0, len - 1,
                                          phi.cylinders()[j].word, 0,
                                          len - 1) == 0)
        return false;
  m_out = len - 1;
  return true;
}

Json clopen_contains_item(const ClopenX& phi, const PointB& alpha, uint64_t p,
                          bool expect) {
  return Json{{"check", "contains"},
              {"phi", phi.to_json()},
              {"point", alpha.to_json()},
              {"level", p},
              {"expect", expect}};
}

}  // namespace

bool in_A_m(const ClopenX& phi, uint64_t m) {
  uint64_t found = 0;
  return uniform_block(phi, found) && found == m;
}

std::pair<uint64_t, ClopenX> dense_witness_in_Am(const BasicOpen& v,
                                                 const RepSet& E,
                                                 uint64_t eq_budget) {
  if (basic_nonempty(v, eq_budget).state == TriState::No)
    throw CforgeError("dense_witness_in_Am: empty basic open");

  // Deduplicate positive constraints (equal point and level collapse).
  std::vector<const SubbasicConstraint*> pos;
  for (const auto& c : v.positives) {
    bool dup = false;
    for (const auto* q : pos) {
      if (q->level != c.level) continue;
      TriState eq = point_equal(q->point, c.point, eq_budget);
      if (eq == TriState::Yes) {
        dup = true;
        break;
      }
      if (eq == TriState::Unknown)
        throw CforgeError(
            "dense_witness_in_Am: positive points not separable within "
            "the equality budget");
    }
    if (!dup) pos.push_back(&c);
  }

  // Largest pairwise first-difference among same-level constraint pairs
  // that the witness has to respect.
  uint64_t sep = 0;
  auto note_pair = [&](const SubbasicConstraint& a, const SubbasicConstraint& b) {
    if (a.level != b.level) return;
    auto d = first_difference(a.point, b.point, eq_budget);
    if (!d)
      throw CforgeError(
          "dense_witness_in_Am: separation not achievable within the "
          "equality budget");
    sep = std::max(sep, *d);
  };
  for (size_t i = 0; i < pos.size(); ++i)
    for (size_t j = i + 1; j < pos.size(); ++j) note_pair(*pos[i], *pos[j]);
  for (const auto* p : pos)
    for (const auto& n : v.negatives) note_pair(*p, n);

  uint64_t lvl = max_level(v);
  uint64_t l = 0;
  while (!(E.contains(l + 1) && l + 1 > lvl && l >= sep + 1)) ++l;

  ClopenX phi;
  if (!pos.empty()) {
    std::vector<Cylinder> cyls;
    for (const auto* p : pos)
      cyls.push_back(Cylinder{p->level, p->point.prefix(l + 2)});
    phi = ClopenX::canonicalize(cyls);
  } else {
    // Fresh level-0 word of length l+2 dodging every negative point.
    for (uint64_t c = 0;; ++c) {
      if (c >= (uint64_t{1} << std::min<uint64_t>(l + 2, 20)))
        throw CforgeError("dense_witness_in_Am: no fresh word found");
      Word w;
      for (uint64_t i = 0; i < l + 2; ++i)
        w.push_back((c >> i) & 1 ? '1' : '0');
      bool clash = false;
      for (const auto& n : v.negatives)
        if (n.level == 0 && n.point.prefix(l + 2) == w) clash = true;
      if (!clash) {
        phi = ClopenX::canonicalize({Cylinder{0, w}});
        break;
      }
    }
  }

  if (!member_basic(phi, v))
    throw CforgeError("dense_witness_in_Am: witness failed membership");
  if (!in_A_m(phi, l + 1))
    throw CforgeError("dense_witness_in_Am: witness failed the block test");
  return {l, phi};
}

DiagonalReport diagonal_avoid_selector(const RepSet& E, const Selector& S,
                                       const ClopenX& phi, uint64_t depth) {
  if (phi.empty())
    throw CforgeError("diagonal_avoid_selector: phi must be nonempty");
  DiagonalReport rep;
  rep.t1 = phi.cylinders().front().word;
  rep.p1 = phi.cylinders().front().level;
  rep.depth = depth;

  std::map<uint64_t, ClopenX> blocks;  // validated selector values
  auto block = [&](uint64_t k) -> const ClopenX& {
    auto it = blocks.find(k);
    if (it != blocks.end()) return it->second;
    ClopenX z = S.choose(k);
    if (!in_A_m(z, k))
      throw CforgeError("diagonal_avoid_selector: invalid selector at block " +
                        std::to_string(k));
    return blocks.emplace(k, std::move(z)).first->second;
  };

  // The recursion: copy t1, then set a 1 exactly when extending by 0 would
  // land the cone inside the current selector block.
  rep.bits.resize(depth + 1, false);
  Word prefix;
  for (uint64_t n = 0; n <= depth; ++n) {
    bool bit = false;
    if (n < rep.t1.size()) {
      bit = rep.t1[n] == '1';
    } else if (E.contains(n)) {
      Word u = prefix + '0';
      for (const auto& c : block(n).cylinders())
        if (c.level == rep.p1 && c.word == u) bit = true;
    }
    rep.bits[n] = bit;
    prefix.push_back(bit ? '1' : '0');
  }

  std::set<uint64_t> ones;
  for (uint64_t n = 0; n <= depth; ++n)
    if (rep.bits[n]) ones.insert(n);
  rep.alpha = PointB(RepSet::finite(ones));

  bool ok = true;
  // Clause 1: anchor membership.
  bool anchor = contains_point(phi, rep.alpha, rep.p1);
  ok = ok && anchor;
  rep.evidence.push_back(clopen_contains_item(phi, rep.alpha, rep.p1, true));
  // Clause 2: avoidance of every block along E.
  uint64_t avoided = 0, recorded = 0;
  for (uint64_t k = rep.t1.size(); k <= depth; ++k) {
    if (!E.contains(k)) continue;
    bool hit = contains_point(block(k), rep.alpha, rep.p1);
    if (hit) ok = false;
    ++avoided;
    if (hit || recorded < 6) {
      rep.evidence.push_back(
          clopen_contains_item(block(k), rep.alpha, rep.p1, false));
      ++recorded;
    }
  }
  rep.evidence.push_back(
      Json{{"check", "note"}, {"avoided_blocks", avoided}});
  // Clause 3: ones outside the copied word lie in E.
  for (uint64_t n : ones)
    if (n >= rep.t1.size() && !E.contains(n)) ok = false;
  rep.evidence.push_back(Json{{"check", "ones_in_E"},
                              {"ones", ones},
                              {"copied_prefix", rep.t1.size()}});
  rep.ok = ok;
  return rep;
}

Certificate xI_not_qplus(const IdealHandle& ideal, const RepSet& E,
                         const ClopenX& phi, const Selector& S,
                         uint64_t depth) {
  if (ideal.member(E) != TriState::Yes)
    throw CforgeError("xI_not_qplus: E must be a member of the ideal");
  if (E.surely_infinite() != TriState::Yes)
    throw CforgeError("xI_not_qplus: E must be provably infinite");

  DiagonalReport rep = diagonal_avoid_selector(E, S, phi, depth);

  Certificate cert;
  cert.provenance = Json{{"artifact", kArtifactVersion},
                         {"pairing", kPairingVersion},
                         {"enumeration", kEnumerationVersion},
                         {"ideal", ideal.name},
                         {"depth", depth}};
  cert.evidence = rep.evidence;

  // alpha's support sits inside E plus a finite head, so it is ideal-legal
  // by downward closure.
  RepSet head = [&] {
    std::set<uint64_t> h;
    for (uint64_t i = 0; i < rep.t1.size(); ++i) h.insert(i);
    return RepSet::finite(std::move(h));
  }();
  RepSet hull = RepSet::set_union({E, head});
  RepSet support = RepSet::subset_of(
      hull, [a = rep.alpha](uint64_t n) { return a(n); }, "alpha-ones");
  TriState legal = ideal.member(support);
  cert.evidence.push_back(Json{{"check", "ideal_member"},
                               {"ideal", ideal.name},
                               {"set", rep.alpha.to_json()},
                               {"result", to_string(legal)},
                               {"expect", "yes"}});
  cert.kind = (rep.ok && legal == TriState::Yes) ? Certificate::Kind::Verified
                                                 : Certificate::Kind::Refuted;
  return cert;
}

bool D_membership(const RepSet& A, const ClopenX& phi) {
  for (const auto& c : phi.cylinders()) {
    bool zero_in_A = false;
    for (size_t i = 0; i < c.word.size(); ++i)
      if (c.word[i] == '0' && A.contains(i)) {
        zero_in_A = true;
        break;
      }
    if (!zero_in_A) return false;
  }
  return true;
}

Certificate D_status(const RepSet& A, const IdealHandle& ideal,
                     const ProbeFamily& probes) {
  TriState in_ideal = ideal.member(A);
  if (in_ideal == TriState::Unknown)
    throw CforgeError("D_status: ideal membership of A undecided");

  ProbeTarget target;
  target.indices.pred = [A](uint64_t n) {
    return D_membership(A, enumeration::unrank(n)) ? TriState::Yes
                                                   : TriState::No;
  };
  target.indices.desc = "D(A)";
  target.copy = ProbeTarget::Copy::Phi;

  if (in_ideal == TriState::No) {
    Certificate cert = density_probe(target, ideal, probes);
    cert.provenance["branch"] = "dense";
    return cert;
  }

  // A in the ideal: D(A) is nowhere dense and closed.  The refinement for a
  // probe V adds (beta, m1)+ for beta = chi_{A u s1^{-1}(1)} with s1 an
  // all-ones word at a fresh level: every clopen containing (beta, m1) has a
  // cylinder whose zeros avoid A, hence lies outside D(A).
  PointB beta0(RepSet::set_union({A, RepSet::finite({0})}));
  RefinementSuggestor suggest = [&](const BasicOpen& v) {
    std::vector<BasicOpen> out;
    BasicOpen w = v;
    uint64_t m1 = max_level(v) + 1;
    PointB beta(RepSet::set_union({A, RepSet::finite({0})}));
    w.add(true, beta, m1);
    out.push_back(std::move(w));
    return out;
  };
  Certificate cert = nwd_probe(target, ideal, probes, suggest);
  cert.provenance["branch"] = "nwd+closed";

  // Closedness clause, exact to the index bound: (beta0, 0)+ misses D(A)'.
  uint64_t bound = probes.bounds.index_bound;
  std::optional<uint64_t> violation;
  for (uint64_t n = 0; n < bound; ++n) {
    ClopenX phi = enumeration::unrank(n);
    if (D_membership(A, phi) && contains_point(phi, beta0, 0)) {
      violation = n;
      break;
    }
  }
  if (violation) {
    cert.kind = Certificate::Kind::Refuted;
    cert.evidence.push_back(
        clopen_contains_item(enumeration::unrank(*violation), beta0, 0, false));
  } else {
    cert.evidence.push_back(Json{{"check", "closed_clause"},
                                 {"beta", beta0.to_json()},
                                 {"level", 0},
                                 {"index_bound", bound},
                                 {"violations", 0}});
  }
  return cert;
}

Certificate xinoSS_certificate(const IdealHandle& ideal,
                               const std::vector<RepSet>& A,
                               const std::vector<std::vector<uint64_t>>& K,
                               uint64_t M) {
  if (K.size() > A.size())
    throw CforgeError("xinoSS_certificate: more index lists than sets");
  Certificate cert;
  cert.provenance = Json{{"artifact", kArtifactVersion},
                         {"pairing", kPairingVersion},
                         {"enumeration", kEnumerationVersion},
                         {"ideal", ideal.name},
                         {"levels", M}};

  // Validate K_n inside D(A_n) and compute the q_n cutoffs.
  std::vector<uint64_t> q(K.size(), 0);
  for (size_t n = 0; n < K.size(); ++n) {
    for (uint64_t idx : K[n]) {
      ClopenX phi = enumeration::unrank(idx);
      if (!D_membership(A[n], phi))
        throw CforgeError("xinoSS_certificate: K_" + std::to_string(n) +
                          " leaves D(A_" + std::to_string(n) + ")");
      for (const auto& c : phi.cylinders())
        q[n] = std::max<uint64_t>(q[n], c.word.size() + 1);
    }
  }

  std::set<uint64_t> B;
  for (size_t n = 0; n < K.size(); ++n)
    for (uint64_t e = 0; e <= q[n]; ++e)
      if (A[n].contains(e)) B.insert(e);
  RepSet Bset = RepSet::finite(B);
  PointB beta(Bset);

  TriState in_ideal = ideal.member(Bset);
  cert.evidence.push_back(Json{{"check", "ideal_member"},
                               {"ideal", ideal.name},
                               {"set", Bset.to_json()},
                               {"result", to_string(in_ideal)},
                               {"expect", "yes"}});

  bool ok = in_ideal == TriState::Yes;
  uint64_t checks = 0;
  for (size_t n = 0; n < K.size(); ++n)
    for (uint64_t idx : K[n])
      for (uint64_t m = 0; m < M; ++m) {
        ClopenX phi = enumeration::unrank(idx);
        bool hit = contains_point(phi, beta, m);
        ++checks;
        if (hit || checks <= 16)
          cert.evidence.push_back(clopen_contains_item(phi, beta, m, false));
        if (hit) ok = false;
      }
  cert.evidence.push_back(Json{{"check", "note"},
                               {"q", q},
                               {"avoidance_checks", checks}});
  cert.kind = ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  return cert;
}

ClopenX x_seq(uint64_t n) {
  Word w(n, '0');
  w.push_back('1');
  return ClopenX::canonicalize({Cylinder{0, w}});
}

ConvergeResult converging_sequence(const BasicOpen& v, uint64_t eq_budget) {
  if (!v.positives.empty())
    throw CforgeError("converging_sequence: positive constraint present");
  // x_n = [0^n 1] x {0} meets (beta, 0) exactly when n is the position of
  // beta's first 1; levels other than 0 never match.
  ConvergeResult r;
  for (const auto& c : v.negatives) {
    if (c.level != 0) continue;
    for (uint64_t i = 0; i < eq_budget; ++i)
      if (c.point(i)) {
        r.N = std::max(r.N, i + 1);
        break;
      }
  }
  for (uint64_t n = 0; n <= r.N; ++n)
    if (!member_basic(x_seq(n), v)) r.n_star = n + 1;
  return r;
}

Certificate closed_discrete_check(const IdealHandle& ideal, const RepSet& F,
                                  uint64_t M, uint64_t N) {
  Certificate cert;
  cert.provenance = Json{{"artifact", kArtifactVersion},
                         {"enumeration", kEnumerationVersion},
                         {"ideal", ideal.name},
                         {"levels", M},
                         {"indices", N}};
  PointB chi(F);
  bool refuted = false, exhausted = false;
  Json witnesses = Json::array();
  for (uint64_t n = 0; n < N; ++n) {
    if (F.contains(n)) {
      for (uint64_t m = 0; m < M; ++m)
        if (!enumeration::psi_eval(n, chi, m)) {
          refuted = true;
          cert.evidence.push_back(Json{{"check", "psi_member"},
                                       {"n", n},
                                       {"phi", enumeration::unrank(n).to_json()},
                                       {"point", chi.to_json()},
                                       {"level", m},
                                       {"expect", true}});
        }
      continue;
    }
    // Exit witness: one level above everything phi_n mentions.
    ClopenX phi = enumeration::unrank(n);
    uint64_t w = 0;
    for (const auto& c : phi.cylinders()) w = std::max(w, c.level + 1);
    if (enumeration::psi_eval(n, chi, w)) {
      refuted = true;
      cert.evidence.push_back(Json{{"check", "psi_member"},
                                   {"n", n},
                                   {"phi", phi.to_json()},
                                   {"point", chi.to_json()},
                                   {"level", w},
                                   {"expect", false}});
      continue;
    }
    if (w >= M) {
      // The bounded intersection over m < M cannot exclude n.
      bool excluded = false;
      for (uint64_t m = 0; m < M; ++m)
        if (!enumeration::psi_eval(n, chi, m)) excluded = true;
      if (!excluded) {
        exhausted = true;
        cert.evidence.push_back(
            Json{{"check", "note"}, {"witness_beyond_levels", n}});
        continue;
      }
    }
    if (witnesses.size() < 24)
      witnesses.push_back(Json{{"check", "psi_member"},
                               {"n", n},
                               {"phi", phi.to_json()},
                               {"point", chi.to_json()},
                               {"level", w},
                               {"expect", false}});
  }
  cert.evidence.push_back(
      Json{{"check", "note"}, {"exit_witness_samples", witnesses}});
  cert.kind = refuted     ? Certificate::Kind::Refuted
              : exhausted ? Certificate::Kind::Exhausted
                          : Certificate::Kind::Verified;
  return cert;
}

GammaResult gamma_preimage(const PointB& alpha, uint64_t p, uint64_t bound) {
  if (!alpha.ones_view() || !alpha.ones_view()->finite_size())
    throw CforgeError("gamma_preimage: alpha needs a finite ones view");
  GammaResult r;
  for (uint64_t n : alpha.ones_view()->elems())
    if (!contains_point(enumeration::unrank(n), alpha, p)) r.A.insert(n);

  r.cert.provenance = Json{{"artifact", kArtifactVersion},
                           {"enumeration", kEnumerationVersion},
                           {"level", p},
                           {"bound", bound}};
  bool ok = true;
  for (uint64_t n = 0; n < bound; ++n) {
    bool lhs = contains_point(enumeration::unrank(n), alpha, p);
    bool rhs = enumeration::psi_eval(n, alpha, p) && r.A.count(n) == 0;
    if (lhs != rhs) {
      ok = false;
      r.cert.evidence.push_back(Json{{"check", "note"},
                                     {"equivalence_failed_at", n},
                                     {"lhs", lhs},
                                     {"rhs", rhs}});
      break;
    }
  }
  r.cert.evidence.push_back(Json{{"check", "note"},
                                 {"exceptional", r.A},
                                 {"equivalence_bound", bound}});
  r.cert.kind =
      ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  return r;
}

Certificate accumulation_check(const RepSet& A, uint64_t l, const BasicOpen& v,
                               uint64_t bound, const IdealHandle& ideal) {
  if (!member_basic_psi(l, v))
    throw CforgeError("accumulation_check: psi_l not in V");
  Certificate cert;
  cert.provenance = Json{{"artifact", kArtifactVersion},
                         {"enumeration", kEnumerationVersion},
                         {"ideal", ideal.name},
                         {"anchor", l},
                         {"bound", bound}};
  std::vector<uint64_t> prefix;
  uint64_t psi_count = 0;
  for (uint64_t n = 0; n < bound; ++n) {
    if (!A.contains(n)) continue;
    if (member_basic(enumeration::unrank(n), v)) prefix.push_back(n);
    if (member_basic_psi(n, v)) ++psi_count;
  }
  RepSet closure = RepSet::subset_of(
      A, [v](uint64_t n) { return member_basic(enumeration::unrank(n), v); },
      "phi-in-V");
  TriState tri = ideal.member(closure);
  Json head = Json::array();
  for (size_t i = 0; i < prefix.size() && i < 64; ++i) head.push_back(prefix[i]);
  cert.evidence.push_back(Json{{"check", "note"},
                               {"prefix", head},
                               {"count", prefix.size()},
                               {"psi_count", psi_count},
                               {"ideal_member", to_string(tri)}});
  cert.kind = Certificate::Kind::Verified;
  return cert;
}

std::pair<RepSet, Certificate> no_convergence_witness(const IdealHandle& ideal,
                                                      const RepSet& A,
                                                      uint64_t M, uint64_t N) {
  if (!ideal.is_tall)
    throw CforgeError("no_convergence_witness: ideal is not tall");
  RepSet B = ideal.thin_subset(A);
  Certificate cert = closed_discrete_check(ideal, B, M, N);
  cert.provenance["construction"] = "thin_subset";
  TriState in_ideal = ideal.member(B);
  cert.evidence.push_back(Json{{"check", "ideal_member"},
                               {"ideal", ideal.name},
                               {"set", B.serializable() ? B.to_json() : Json(nullptr)},
                               {"result", to_string(in_ideal)},
                               {"expect", "yes"}});
  if (in_ideal != TriState::Yes) cert.kind = Certificate::Kind::Refuted;
  return {B, cert};
}

YnotqResult y_not_qplus(const IdealHandle& ideal, const Bounds& bounds,
                        uint64_t k_max) {
  // L: indices whose clopen lies in no block A_m.
  RepSet L = RepSet::opaque(
      [](uint64_t n) {
        uint64_t m;
        return !uniform_block(enumeration::unrank(n), m);
      },
      "L");
  YnotqResult r{L, ideal.thin_subset(L, k_max), {}, {}, PointB(), Certificate()};

  for (uint64_t k = 0; k < k_max; ++k) r.m_k.push_back(L.nth(k));
  // Deterministic selector: the least member of each block, the single
  // all-zero-word level-0 cylinder.
  for (uint64_t m : r.m_k)
    r.selector.push_back(
        ClopenX::canonicalize({Cylinder{0, Word(m + 1, '0')}}));

  // The recursion over level-0 words of the selector members.
  uint64_t top = r.m_k.back();
  std::vector<bool> bits(top + 1, false);
  std::map<uint64_t, size_t> block_of;  // m_k value -> k
  for (size_t k = 0; k < r.m_k.size(); ++k) block_of[r.m_k[k]] = k;
  Word prefix;
  for (uint64_t n = 0; n <= top; ++n) {
    bool bit = false;
    auto it = block_of.find(n);
    if (it != block_of.end() && r.L_prime.contains(n)) {
      Word u = prefix + '0';
      for (const auto& c : r.selector[it->second].cylinders())
        if (c.level == 0 && c.word == u) bit = true;
    }
    bits[n] = bit;
    prefix.push_back(bit ? '1' : '0');
  }
  std::set<uint64_t> ones;
  for (uint64_t n = 0; n <= top; ++n)
    if (bits[n]) ones.insert(n);
  r.alpha = PointB(RepSet::finite(ones));

  Certificate& cert = r.cert;
  cert.provenance = make_provenance(ideal.name, 42, bounds);
  cert.provenance["k_max"] = k_max;
  bool ok = true;

  // alpha's support lies in L' (hence in the ideal).
  for (uint64_t n : ones)
    if (!r.L_prime.contains(n)) ok = false;
  cert.evidence.push_back(Json{{"check", "ones_in_E"},
                               {"ones", ones},
                               {"copied_prefix", 0}});
  cert.evidence.push_back(Json{{"check", "ideal_member"},
                               {"ideal", ideal.name},
                               {"set", r.alpha.to_json()},
                               {"result", to_string(ideal.member(
                                              *r.alpha.ones_view()))},
                               {"expect", "yes"}});

  // psi_q lands in (alpha, 0)+ since phi_q is the full level-0 slice.
  uint64_t q = enumeration::q_index();
  bool psi_q_in = enumeration::psi_eval(q, r.alpha, 0);
  if (!psi_q_in) ok = false;
  BasicOpen aplus;
  aplus.ideal_tag = ideal.name;
  aplus.add(true, r.alpha, 0);
  cert.evidence.push_back(Json{{"check", "psi_member"},
                               {"n", q},
                               {"phi", enumeration::unrank(q).to_json()},
                               {"point", r.alpha.to_json()},
                               {"level", 0},
                               {"expect", true}});

  // Selector avoidance: alpha(n_k) = 0 structurally (n_k outside L because
  // its clopen sits in a block), and (alpha, 0) misses every selector member.
  for (size_t k = 0; k < r.selector.size(); ++k) {
    if (!in_A_m(r.selector[k], r.m_k[k])) ok = false;
    bool hit = contains_point(r.selector[k], r.alpha, 0);
    if (hit) ok = false;
    if (hit || k < 6)
      cert.evidence.push_back(
          clopen_contains_item(r.selector[k], r.alpha, 0, false));
  }
  cert.evidence.push_back(Json{{"check", "note"},
                               {"blocks", r.m_k.size()},
                               {"psi_q_anchor", psi_q_in}});

  // Density of B (tri-state, not gating).
  std::set<uint64_t> block_values(r.m_k.begin(), r.m_k.end());
  ProbeTarget target;
  target.indices.pred = [block_values](uint64_t n) {
    uint64_t m;
    if (!uniform_block(enumeration::unrank(n), m)) return TriState::No;
    return block_values.count(m) ? TriState::Yes : TriState::No;
  };
  target.indices.desc = "B";
  target.copy = ProbeTarget::Copy::Psi;
  ProbeFamily probes = make_probe_family(ideal.name, 42, bounds);
  Certificate density = density_probe(target, ideal, probes);
  cert.evidence.push_back(
      Json{{"check", "subcert"}, {"stage", "B-density"}, {"cert", density.to_json()}});

  cert.kind = ok ? Certificate::Kind::Verified : Certificate::Kind::Refuted;
  return r;
}

Certificate yknoss_pipeline(const IdealHandle& ideal, const IdealTower& tower,
                            uint64_t n_max, const ProbeFamily& probes) {
  Certificate cert;
  cert.provenance = make_provenance(ideal.name, probes.seed, probes.bounds);
  cert.provenance["n_max"] = n_max;
  if (n_max == 0) {
    cert.kind = Certificate::Kind::Verified;
    cert.evidence.push_back(Json{{"check", "trivial"}, {"note", "n_max = 0"}});
    return cert;
  }

  // Pairwise disjoint basic opens U_n cut out by the sign of (chi_{n}, 0).
  std::vector<BasicOpen> U;
  for (uint64_t n = 0; n < n_max; ++n) {
    BasicOpen u;
    u.ideal_tag = ideal.name;
    for (uint64_t j = 0; j < n; ++j)
      u.add(false, PointB(RepSet::finite({j})), 0);
    u.add(true, PointB(RepSet::finite({n})), 0);
    U.push_back(std::move(u));
  }
  for (uint64_t i = 0; i < n_max; ++i)
    for (uint64_t j = i + 1; j < n_max; ++j) {
      // U_j carries (chi_i, 0)- while U_i carries it positively: disjoint.
      cert.evidence.push_back(Json{{"check", "note"},
                                   {"disjoint", Json::array({i, j})},
                                   {"reason", "opposite sign at the shared constraint"}});
    }

  bool exhausted = false, refuted = false;
  std::set<uint64_t> F;
  uint64_t scan = std::min<uint64_t>(probes.bounds.index_bound, 5000);
  for (uint64_t n = 0; n < n_max; ++n) {
    // K_n: a few indices with phi_m in U_n.
    std::vector<uint64_t> Kn;
    for (uint64_t m = 0; m < scan && Kn.size() < 3; ++m)
      if (member_basic(enumeration::unrank(m), U[n])) Kn.push_back(m);
    if (Kn.empty()) {
      exhausted = true;
      cert.evidence.push_back(
          Json{{"check", "note"}, {"empty_block", n}, {"scanned", scan}});
      continue;
    }
    for (uint64_t m : Kn) {
      F.insert(m);
      cert.evidence.push_back(Json{{"check", "member_basic"},
                                   {"n", m},
                                   {"phi", enumeration::unrank(m).to_json()},
                                   {"V", U[n].to_json()},
                                   {"expect", true}});
    }
    // Star level: is the index set of U_n small in I*?
    IndexSet An;
    An.pred = [u = U[n]](uint64_t m) {
      return member_basic(enumeration::unrank(m), u) ? TriState::Yes
                                                     : TriState::No;
    };
    An.desc = "A_" + std::to_string(n);
    auto [t1, c1] = tower.member(1, An, probes);
    cert.evidence.push_back(Json{{"check", "subcert"},
                                 {"stage", "star-level A_" + std::to_string(n)},
                                 {"cert", c1.to_json()}});
    if (t1 == TriState::Unknown) exhausted = true;
  }

  // Star-star level on the finite union of the selections.
  RepSet Fset = RepSet::finite(F);
  auto [t2, c2] = tower.member(2, IndexSet::of(Fset, "union-K"), probes);
  cert.evidence.push_back(
      Json{{"check", "subcert"}, {"stage", "star-star union-K"}, {"cert", c2.to_json()}});
  if (t2 == TriState::Unknown) exhausted = true;

  Certificate cd = closed_discrete_check(ideal, Fset, 4, 200);
  cert.evidence.push_back(
      Json{{"check", "subcert"}, {"stage", "closed-discrete union-K"}, {"cert", cd.to_json()}});
  if (cd.kind == Certificate::Kind::Refuted) refuted = true;
  if (cd.kind == Certificate::Kind::Exhausted) exhausted = true;

  cert.kind = refuted     ? Certificate::Kind::Refuted
              : exhausted ? Certificate::Kind::Exhausted
                          : Certificate::Kind::Verified;
  return cert;
}

}  // namespace cforge
