#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "cforge/constructions.hpp"
#include "cforge/enumeration.hpp"
#include "doctest.h"

using namespace cforge;

TEST_CASE("block membership: uniform word length m+1, levels at most m") {
  CHECK(in_A_m(ClopenX::canonicalize({Cylinder{0, "01"}}), 1));
  CHECK(in_A_m(
      ClopenX::canonicalize({Cylinder{0, "00"}, Cylinder{1, "11"}}), 1));
  CHECK(!in_A_m(ClopenX::canonicalize({Cylinder{0, "01"}}), 0));
  CHECK(!in_A_m(ClopenX::canonicalize({Cylinder{2, "01"}}), 1));  // level 2
  CHECK(!in_A_m(ClopenX{}, 1));                                   // empty
  // Equal word restrictions across levels violate the block condition.
  CHECK(!in_A_m(
      ClopenX::canonicalize({Cylinder{0, "00"}, Cylinder{1, "01"}}), 1));
  CHECK(!in_A_m(
      ClopenX::canonicalize({Cylinder{0, "00"}, Cylinder{1, "00"}}), 1));
  // Sibling words merge away, leaving a shorter canonical word.
  ClopenX merged =
      ClopenX::canonicalize({Cylinder{0, "10"}, Cylinder{0, "11"}});
  CHECK(!in_A_m(merged, 1));
  CHECK(in_A_m(merged, 0));
}

TEST_CASE("blocks are pairwise disjoint") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Cylinder> cyls;
    uint64_t count = 1 + rng() % 3;
    for (uint64_t i = 0; i < count; ++i) {
      Cylinder c;
      c.level = rng() % 3;
      uint64_t len = rng() % 4;
      for (uint64_t b = 0; b < len; ++b)
        c.word.push_back(rng() % 2 ? '1' : '0');
      cyls.push_back(c);
    }
    ClopenX phi = ClopenX::canonicalize(cyls);
    int hits = 0;
    for (uint64_t m = 0; m < 5; ++m) hits += in_A_m(phi, m) ? 1 : 0;
    CHECK(hits <= 1);
  }
}

TEST_CASE("density witnesses live in the requested block and probe") {
  Bounds b;
  b.probe_count = 25;
  ProbeFamily probes = make_probe_family("fin", 7, b);
  RepSet evens = RepSet::periodic("", "10");
  for (const auto& v : probes.probes) {
    auto [l, phi] = dense_witness_in_Am(v, evens);
    CHECK(evens.contains(l + 1));
    CHECK(member_basic(phi, v));
    CHECK(in_A_m(phi, l + 1));
  }
}

TEST_CASE("the diagonal point escapes every selector block") {
  Selector s;
  s.E = RepSet::naturals();
  s.choose = [](uint64_t k) {
    Word w(k, '0');
    w.push_back('1');
    return ClopenX::canonicalize({Cylinder{0, w}});
  };
  ClopenX phi = ClopenX::canonicalize({Cylinder{0, "10"}});
  DiagonalReport rep = diagonal_avoid_selector(s.E, s, phi, 100);
  CHECK(rep.ok);
  CHECK(rep.t1 == Word("10"));
  CHECK(rep.p1 == 0);
  // Anchor clause re-checked directly.
  CHECK(contains_point(phi, rep.alpha, rep.p1));
  // Avoidance re-checked directly.
  for (uint64_t k = rep.t1.size(); k <= 100; ++k)
    CHECK(!contains_point(s.choose(k), rep.alpha, 0));
}

TEST_CASE("the q+ failure pipeline verifies for admissible ideals") {
  Selector s;
  s.E = RepSet::fiber(RepSet::Axis::Second, 0);
  s.choose = [](uint64_t k) {
    Word w(k, '0');
    w.push_back('1');
    return ClopenX::canonicalize({Cylinder{0, w}});
  };
  ClopenX phi = ClopenX::canonicalize({Cylinder{0, "1"}});
  IdealHandle exf = builtin_ideal("empty-x-fin");
  Certificate c = xI_not_qplus(exf, s.E, phi, s, 200);
  CHECK(c.kind == Certificate::Kind::Verified);

  // Fin admits no infinite member: the precondition is rejected.
  IdealHandle fin = builtin_ideal("fin");
  CHECK_THROWS_AS(xI_not_qplus(fin, RepSet::naturals(), phi, s, 50),
                  CforgeError);
}

TEST_CASE("D-set membership is the zero-position condition") {
  RepSet evens = RepSet::periodic("", "10");
  CHECK(D_membership(evens, ClopenX{}));  // vacuous
  CHECK(D_membership(evens, ClopenX::canonicalize({Cylinder{0, "0"}})));
  CHECK(!D_membership(evens, ClopenX::canonicalize({Cylinder{0, "1"}})));
  CHECK(!D_membership(evens, ClopenX::canonicalize({Cylinder{0, "10"}})));
  CHECK(D_membership(evens, ClopenX::canonicalize({Cylinder{0, "110"}})));
  // Every cylinder must qualify.
  CHECK(!D_membership(
      evens, ClopenX::canonicalize({Cylinder{0, "0"}, Cylinder{1, "1"}})));
}

TEST_CASE("D trichotomy: dense when outside the ideal, nwd when inside") {
  Bounds b;
  b.index_bound = 20000;
  b.probe_count = 12;
  IdealHandle fin = builtin_ideal("fin");
  Certificate dense = D_status(RepSet::periodic("", "10"), fin,
                               make_probe_family("fin", 42, b));
  CHECK(dense.kind == Certificate::Kind::Verified);

  IdealHandle exf = builtin_ideal("empty-x-fin");
  Certificate nwd = D_status(RepSet::fiber(RepSet::Axis::Second, 0), exf,
                             make_probe_family("empty-x-fin", 42, b));
  CHECK(nwd.kind == Certificate::Kind::Verified);
  // Unknown ideal membership is a caller error.
  CHECK_THROWS_AS(
      D_status(RepSet::opaque([](uint64_t) { return false; }, "x"), fin,
               make_probe_family("fin", 42, b)),
      CforgeError);
}

TEST_CASE("the finite-union bound certificate verifies") {
  IdealHandle exf = builtin_ideal("empty-x-fin");
  std::vector<RepSet> A;
  std::vector<std::vector<uint64_t>> K;
  for (uint64_t n = 0; n < 3; ++n) {
    A.push_back(exf.non_pplus_witness(n));
    std::vector<uint64_t> kn;
    for (uint64_t idx = 1; idx < 3000 && kn.size() < 2; ++idx)
      if (D_membership(A.back(), enumeration::unrank(idx))) kn.push_back(idx);
    K.push_back(kn);
  }
  Certificate c = xinoSS_certificate(exf, A, K, 5);
  CHECK(c.kind == Certificate::Kind::Verified);
}

TEST_CASE("the standard sequence enters negative neighborhoods cofinitely") {
  CHECK(x_seq(0) == ClopenX::canonicalize({Cylinder{0, "1"}}));
  CHECK(in_A_m(x_seq(4), 4));
  BasicOpen v;
  v.ideal_tag = "fin";
  v.add(false, PointB(RepSet::finite({2})), 0);
  ConvergeResult r = converging_sequence(v);
  // chi_{2} has first one at position 2, so exactly x_2 is excluded.
  CHECK(r.n_star == 3);
  CHECK(r.n_star <= r.N);
  CHECK(!member_basic(x_seq(2), v));
  for (uint64_t n = r.n_star; n < r.n_star + 30; ++n)
    CHECK(member_basic(x_seq(n), v));
  // Positive constraints are outside this construction's domain.
  BasicOpen pos;
  pos.add(true, PointB(RepSet::finite({0})), 0);
  CHECK_THROWS_AS(converging_sequence(pos), CforgeError);
}

TEST_CASE("closed-discrete equality holds for small F") {
  IdealHandle dz = builtin_ideal("density-zero");
  Certificate c = closed_discrete_check(dz, RepSet::finite({1, 2, 7}), 8, 300);
  CHECK(c.kind == Certificate::Kind::Verified);
  Certificate s = closed_discrete_check(dz, RepSet::sparse(0, 1), 8, 300);
  CHECK(s.kind == Certificate::Kind::Verified);
}

TEST_CASE("gamma preimage equivalence holds on the scanned range") {
  GammaResult g = gamma_preimage(PointB(RepSet::finite({0, 3})), 0, 500);
  CHECK(g.cert.kind == Certificate::Kind::Verified);
  // Exceptional indices sit inside the support of alpha.
  for (uint64_t n : g.A) CHECK((n == 0 || n == 3));
  GammaResult empty = gamma_preimage(PointB(RepSet::finite({})), 1, 500);
  CHECK(empty.cert.kind == Certificate::Kind::Verified);
  CHECK(empty.A.empty());
}

TEST_CASE("accumulation and no-convergence chains verify for a tall ideal") {
  IdealHandle dz = builtin_ideal("density-zero");
  BasicOpen v;
  v.ideal_tag = "density-zero";
  v.add(true, PointB(RepSet::finite({0})), 0);
  Certificate acc = accumulation_check(RepSet::naturals(), 1, v, 1000, dz);
  CHECK(acc.kind == Certificate::Kind::Verified);

  auto [b, cert] = no_convergence_witness(dz, RepSet::periodic("", "10"));
  CHECK(cert.kind == Certificate::Kind::Verified);
  CHECK(dz.member(b) == TriState::Yes);
  CHECK(b.surely_infinite() == TriState::Yes);

  IdealHandle fin = builtin_ideal("fin");
  CHECK_THROWS_AS(no_convergence_witness(fin, RepSet::naturals()),
                  CforgeError);
}

TEST_CASE("the y-not-q pipeline produces a legal separating point") {
  IdealHandle dz = builtin_ideal("density-zero");
  Bounds b;
  b.index_bound = 5000;
  b.probe_count = 6;
  YnotqResult r = y_not_qplus(dz, b, 60);
  CHECK(r.cert.kind == Certificate::Kind::Verified);
  CHECK(r.m_k.size() == 60);
  CHECK(r.selector.size() == 60);
  // alpha's support lies inside L'.
  REQUIRE(r.alpha.ones_view().has_value());
  for (uint64_t n : r.alpha.ones_view()->elems())
    CHECK(r.L_prime.contains(n));
  // Selector members really live in their blocks.
  for (size_t k = 0; k < 10; ++k) CHECK(in_A_m(r.selector[k], r.m_k[k]));
}

TEST_CASE("the star-level pipeline runs end to end") {
  Bounds b;
  b.index_bound = 1500;
  b.probe_count = 4;
  b.refinement_count = 4;
  IdealTower tower(b);
  ProbeFamily probes = make_probe_family("fin", 42, b);
  Certificate c =
      yknoss_pipeline(builtin_ideal("power-set"), tower, 2, probes);
  CHECK(c.kind != Certificate::Kind::Refuted);
  Certificate t = yknoss_pipeline(builtin_ideal("power-set"), tower, 0, probes);
  CHECK(t.kind == Certificate::Kind::Verified);
}
