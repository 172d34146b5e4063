// End-to-end acceptance suite.  Each criterion prints exactly one line;
// the process exits nonzero iff any criterion fails.
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "cforge/constructions.hpp"
#include "cforge/enumeration.hpp"
#include "cforge/finite_space.hpp"
#include "cforge/harness.hpp"

using namespace cforge;

namespace {

int failures = 0;

void criterion(int num, const char* desc, const std::function<bool()>& body) {
  bool ok = false;
  std::string err;
  try {
    ok = body();
  } catch (const std::exception& e) {
    err = e.what();
  }
  std::printf("criterion %2d: %s — %s%s%s\n", num, ok ? "pass" : "FAIL", desc,
              err.empty() ? "" : " | exception: ", err.c_str());
  if (!ok) ++failures;
}

// All clopen sets with levels <= 1 expressible at word depth <= 2: unions of
// the eight depth-2 atoms.
std::vector<ClopenX> depth2_family() {
  std::vector<Cylinder> atoms;
  for (uint64_t p = 0; p <= 1; ++p)
    for (const char* w : {"00", "01", "10", "11"})
      atoms.push_back(Cylinder{p, w});
  std::vector<ClopenX> family;
  for (uint32_t mask = 0; mask < (1u << atoms.size()); ++mask) {
    std::vector<Cylinder> cyls;
    for (size_t i = 0; i < atoms.size(); ++i)
      if (mask >> i & 1) cyls.push_back(atoms[i]);
    family.push_back(ClopenX::canonicalize(cyls));
  }
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

// Independent existential oracle: the m-th block is every nonempty union of
// cylinders with words of length exactly m+1, levels <= m, and pairwise
// distinct word restrictions to length m.
std::set<std::string> block_oracle(uint64_t m) {
  std::set<std::string> out;
  uint64_t restrictions = uint64_t{1} << m;     // words of length m
  uint64_t options = 1 + 2 * (m + 1);           // skip, or (bit, level)
  std::vector<uint64_t> choice(restrictions, 0);
  while (true) {
    std::vector<Cylinder> cyls;
    for (uint64_t r = 0; r < restrictions; ++r) {
      if (choice[r] == 0) continue;
      uint64_t c = choice[r] - 1;
      Cylinder cyl;
      cyl.level = c / 2;
      for (uint64_t b = 0; b < m; ++b)
        cyl.word.push_back(r >> b & 1 ? '1' : '0');
      cyl.word.push_back(c % 2 ? '1' : '0');
      cyls.push_back(cyl);
    }
    if (!cyls.empty()) out.insert(ClopenX::canonicalize(cyls).serialize());
    size_t i = 0;
    while (i < choice.size() && ++choice[i] == options) choice[i++] = 0;
    if (i == choice.size()) break;
  }
  return out;
}

}  // namespace

int main() {
  LemmaConfig cfg;  // ideal fin, seed 42, default bounds

  criterion(1, "block characterization matches the existential oracle", [] {
    auto family = depth2_family();
    if (family.size() != 256) return false;
    for (uint64_t m = 0; m <= 2; ++m) {
      auto oracle = block_oracle(m);
      for (const auto& phi : family)
        if (in_A_m(phi, m) != (oracle.count(phi.serialize()) > 0))
          return false;
    }
    for (const auto& phi : family) {
      int hits = 0;
      for (uint64_t m = 0; m <= 2; ++m) hits += in_A_m(phi, m) ? 1 : 0;
      if (hits > 1) return false;
    }
    return true;
  });

  criterion(2, "even-level blocks are dense under fin (200 probes)", [] {
    Bounds b;
    b.probe_count = 200;
    ProbeFamily probes = make_probe_family("fin", 42, b);
    if (probes.probes.size() < 200) return false;
    RepSet evens = RepSet::periodic("", "10");
    for (const auto& v : probes.probes) {
      auto [l, phi] = dense_witness_in_Am(v, evens);
      if (!member_basic(phi, v) || !in_A_m(phi, l + 1)) return false;
      if (!evens.contains(l + 1)) return false;
    }
    return true;
  });

  criterion(3, "diagonal escapes 100 seeded selectors to depth 300", [] {
    for (uint64_t i = 0; i < 100; ++i) {
      Selector s;
      s.E = i % 2 == 0 ? RepSet::naturals() : RepSet::periodic("", "10");
      s.choose = [i](uint64_t k) {
        std::mt19937_64 g((i + 1) * 0x9e3779b97f4a7c15ULL + k);
        Word w;
        for (uint64_t b = 0; b <= k; ++b) w.push_back(g() % 2 ? '1' : '0');
        return ClopenX::canonicalize(
            {Cylinder{g() % (std::min<uint64_t>(k, 3) + 1), w}});
      };
      std::mt19937_64 g(i * 77 + 5);
      Word w;
      for (uint64_t b = 0; b <= i % 3; ++b) w.push_back(g() % 2 ? '1' : '0');
      ClopenX phi = ClopenX::canonicalize({Cylinder{i % 3, w}});
      DiagonalReport rep = diagonal_avoid_selector(s.E, s, phi, 300);
      if (!rep.ok) return false;
      if (!contains_point(phi, rep.alpha, rep.p1)) return false;
    }
    return true;
  });

  criterion(4, "separation pipeline verifies for the Fubini and density ideals",
            [] {
    auto stair = [] {
      Selector s;
      s.choose = [](uint64_t k) {
        Word w(k, '0');
        w.push_back('1');
        return ClopenX::canonicalize({Cylinder{0, w}});
      };
      return s;
    };
    ClopenX phi = ClopenX::canonicalize({Cylinder{0, "1"}});

    IdealHandle exf = builtin_ideal("empty-x-fin");
    Selector s1 = stair();
    s1.E = RepSet::fiber(RepSet::Axis::Second, 0);
    Certificate c1 = xI_not_qplus(exf, s1.E, phi, s1, 300);
    if (c1.kind != Certificate::Kind::Verified) return false;
    bool saw_membership = false;
    for (const auto& e : c1.evidence)
      if (e.value("check", "") == "ideal_member" &&
          e.value("result", "") == "yes")
        saw_membership = true;
    if (!saw_membership) return false;

    IdealHandle dz = builtin_ideal("density-zero");
    Selector s2 = stair();
    s2.E = dz.thin_subset(RepSet::naturals());
    Certificate c2 = xI_not_qplus(dz, s2.E, phi, s2, 300);
    if (c2.kind != Certificate::Kind::Verified) return false;

    IdealHandle fin = builtin_ideal("fin");
    Selector s3 = stair();
    s3.E = RepSet::naturals();
    try {
      xI_not_qplus(fin, s3.E, phi, s3, 50);
      return false;  // the precondition must be rejected
    } catch (const CforgeError&) {
    }
    return true;
  });

  criterion(5, "zero-set trichotomy: dense outside the ideal, nwd inside", [] {
    Bounds b;  // index bound 50000
    IdealHandle fin = builtin_ideal("fin");
    Certificate dense = D_status(RepSet::periodic("", "10"), fin,
                                 make_probe_family("fin", 42, b));
    if (dense.kind != Certificate::Kind::Verified) return false;
    if (!replay(dense)) return false;

    IdealHandle exf = builtin_ideal("empty-x-fin");
    Certificate nwd = D_status(RepSet::fiber(RepSet::Axis::Second, 0), exf,
                               make_probe_family("empty-x-fin", 42, b));
    if (nwd.kind != Certificate::Kind::Verified) return false;
    if (!replay(nwd)) return false;
    bool closed_clause = false;
    for (const auto& e : nwd.evidence)
      if (e.value("check", "") == "closed_clause" &&
          e.value("index_bound", 0) == 50000 && e.value("violations", 1) == 0)
        closed_clause = true;
    return closed_clause;
  });

  criterion(6, "index symmetric-difference bound exact to 2000 on 50 probes",
            [] {
    ProbeFamily probes = make_probe_family("fin", 42, Bounds{});
    if (probes.probes.size() != 50) return false;
    Json prov = make_provenance("fin", 42, Bounds{});
    for (const auto& v : probes.probes)
      if (symdiff_bound_check(v, 2000, prov).kind !=
          Certificate::Kind::Verified)
        return false;
    return true;
  });

  criterion(7, "sequence entry bounds valid on 100 negative neighborhoods", [] {
    ProbeFamily family = make_probe_family("fin", 42, Bounds{});
    auto pool = family.point_pool();
    std::mt19937_64 rng(42);
    for (int i = 0; i < 100; ++i) {
      BasicOpen v;
      v.ideal_tag = "fin";
      uint64_t negs = 1 + rng() % 3;
      for (uint64_t j = 0; j < negs; ++j)
        v.add(false, pool[rng() % pool.size()], rng() % 4);
      ConvergeResult r = converging_sequence(v);
      if (r.n_star > r.N) return false;
      for (uint64_t n = r.n_star; n <= r.n_star + 50; ++n)
        if (!member_basic(x_seq(n), v)) return false;
      if (r.n_star > 0 && member_basic(x_seq(r.n_star - 1), v)) return false;
    }
    return true;
  });

  criterion(8, "closed-discrete equality exact for 25 index sets", [] {
    IdealHandle dz = builtin_ideal("density-zero");
    std::mt19937_64 rng(42);
    for (int i = 0; i < 20; ++i) {
      std::set<uint64_t> f;
      uint64_t sz = rng() % 7;
      for (uint64_t j = 0; j < sz; ++j) f.insert(rng() % 30);
      if (closed_discrete_check(dz, RepSet::finite(f), 16, 1000).kind !=
          Certificate::Kind::Verified)
        return false;
    }
    const std::pair<uint64_t, uint64_t> sparse[5] = {
        {0, 1}, {1, 1}, {0, 2}, {2, 3}, {1, 4}};
    for (auto [a, d] : sparse)
      if (closed_discrete_check(dz, RepSet::sparse(a, d), 16, 1000).kind !=
          Certificate::Kind::Verified)
        return false;
    return true;
  });

  criterion(9, "tall-ideal separation pipeline exact through 200 blocks", [] {
    IdealHandle dz = builtin_ideal("density-zero");
    YnotqResult r = y_not_qplus(dz, Bounds{}, 200);
    if (r.cert.kind != Certificate::Kind::Verified) return false;
    if (r.m_k.size() != 200) return false;
    if (!r.alpha.ones_view().has_value()) return false;
    for (uint64_t n : r.alpha.ones_view()->elems())
      if (!r.L_prime.contains(n)) return false;
    // The exact clauses gate the certificate; the density sub-certificate is
    // recorded tri-state.
    bool has_density_stage = false;
    for (const auto& e : r.cert.evidence)
      if (e.value("check", "") == "subcert") has_density_stage = true;
    return has_density_stage;
  });

  criterion(10, "preimage decomposition and accumulation chains verify", [] {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 20; ++i) {
      std::set<uint64_t> ones;
      uint64_t sz = rng() % 5;
      for (uint64_t j = 0; j < sz; ++j) ones.insert(rng() % 12);
      GammaResult g =
          gamma_preimage(PointB(RepSet::finite(ones)), rng() % 3, 1000);
      if (g.cert.kind != Certificate::Kind::Verified) return false;
    }
    IdealHandle dz = builtin_ideal("density-zero");
    BasicOpen v;
    v.ideal_tag = "density-zero";
    v.add(true, PointB(RepSet::finite({0})), 0);
    if (accumulation_check(RepSet::naturals(), 1, v, 1000, dz).kind !=
        Certificate::Kind::Verified)
      return false;
    auto [b, cert] = no_convergence_witness(dz, RepSet::periodic("", "10"));
    return cert.kind == Certificate::Kind::Verified;
  });

  criterion(11, "finite refinement oracle: counts 1,4,29,355 and identities",
            [] {
    const uint64_t expected[4] = {1, 4, 29, 355};
    for (int n = 1; n <= 4; ++n) {
      auto spaces = enumerate_topologies(n);
      if (spaces.size() != expected[n - 1]) return false;
      if (count_preorders(n) != expected[n - 1]) return false;
      for (const auto& x : spaces)
        if (check_tau_alpha_identities(x).kind !=
            Certificate::Kind::Verified)
          return false;
    }
    return true;
  });

  criterion(12, "enumeration roundtrip below 10^5 with stable anchors", [] {
    if (!enumeration::unrank(0).empty()) return false;
    uint64_t q = enumeration::q_index();
    if (enumeration::unrank(q) !=
        ClopenX::canonicalize({Cylinder{0, Word()}}))
      return false;
    if (enumeration::rank(ClopenX::canonicalize({Cylinder{0, Word()}})) != q)
      return false;
    for (uint64_t n = 0; n < 100000; ++n)
      if (enumeration::rank(enumeration::unrank(n)) != n) return false;
    return true;
  });

  criterion(13, "full suite at seed 42: no refutation, replayable, "
                "byte-identical on rerun", [cfg] {
    auto runs = run_all(cfg, 0);
    if (runs.size() != lemma_ids().size()) return false;
    for (const auto& r : runs) {
      if (r.outcome.kind == Certificate::Kind::Refuted) return false;
      if (!replay(r.outcome)) return false;
    }
    auto rerun = run_all(cfg, 1);
    for (size_t i = 0; i < runs.size(); ++i)
      if (runs[i].to_json().dump() != rerun[i].to_json().dump()) return false;
    return true;
  });

  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
