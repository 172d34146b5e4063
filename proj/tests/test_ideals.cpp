#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cforge/ideals.hpp"
#include "cforge/pairing.hpp"
#include "cforge/topology.hpp"
#include "doctest.h"

using namespace cforge;

TEST_CASE("fin decides the structured kinds") {
  IdealHandle fin = builtin_ideal("fin");
  CHECK(fin.member(RepSet::finite({1, 2, 3})) == TriState::Yes);
  CHECK(fin.member(RepSet::cofinite({0})) == TriState::No);
  CHECK(fin.member(RepSet::periodic("", "10")) == TriState::No);
  CHECK(fin.member(RepSet::periodic("", "0").normalized()) == TriState::Yes);
  CHECK(fin.member(RepSet::sparse(0, 1)) == TriState::No);
  CHECK(fin.member(RepSet::fiber(RepSet::Axis::First, 0)) == TriState::No);
  CHECK(!fin.is_tall);
}

TEST_CASE("density-zero contains the sparse families but no periodic set") {
  IdealHandle dz = builtin_ideal("density-zero");
  CHECK(dz.member(RepSet::sparse(0, 1)) == TriState::Yes);
  CHECK(dz.member(RepSet::fiber(RepSet::Axis::Second, 0)) == TriState::Yes);
  CHECK(dz.member(RepSet::periodic("", "10")) == TriState::No);
  CHECK(dz.member(RepSet::cofinite({})) == TriState::No);
  CHECK(dz.member(RepSet::finite({7})) == TriState::Yes);
  CHECK(dz.is_tall);
}

TEST_CASE("the Fubini product {empty} x Fin reads columns through the pairing") {
  IdealHandle exf = builtin_ideal("empty-x-fin");
  // A row meets every column at most once.
  CHECK(exf.member(RepSet::fiber(RepSet::Axis::Second, 0)) == TriState::Yes);
  // A full column is infinite in one coordinate.
  CHECK(exf.member(RepSet::fiber(RepSet::Axis::First, 0)) == TriState::No);
  CHECK(exf.member(RepSet::finite({0, 1, 2})) == TriState::Yes);
  CHECK(exf.member(RepSet::naturals()) == TriState::No);
  CHECK(exf.has_witness);
}

TEST_CASE("Fin x {empty} is the dual orientation") {
  IdealHandle fxe = builtin_ideal("fin-x-empty");
  CHECK(fxe.member(RepSet::fiber(RepSet::Axis::First, 0)) == TriState::Yes);
  CHECK(fxe.member(RepSet::fiber(RepSet::Axis::Second, 0)) == TriState::No);
  CHECK(fxe.member(RepSet::periodic("", "10")) == TriState::No);
}

TEST_CASE("power-set accepts everything") {
  IdealHandle ps = builtin_ideal("power-set");
  CHECK(ps.member(RepSet::naturals()) == TriState::Yes);
  CHECK(ps.member(RepSet::opaque([](uint64_t) { return true; }, "x")) ==
        TriState::Yes);
  CHECK(ps.is_tall);
}

TEST_CASE("unknown ideal names are rejected") {
  CHECK_THROWS_AS(builtin_ideal("no-such-ideal"), CforgeError);
}

TEST_CASE("union and subset reasoning") {
  IdealHandle fin = builtin_ideal("fin");
  RepSet u = RepSet::set_union({RepSet::finite({1}), RepSet::finite({5})});
  CHECK(fin.member(u) == TriState::Yes);
  RepSet sub = RepSet::subset_of(
      RepSet::finite({1, 2}), [](uint64_t n) { return n == 1; }, "one");
  CHECK(fin.member(sub) == TriState::Yes);
}

TEST_CASE("thin_subset yields an infinite ideal member inside its parent") {
  IdealHandle dz = builtin_ideal("density-zero");
  RepSet e = RepSet::periodic("", "10");  // evens, not in density-zero
  RepSet t = dz.thin_subset(e);
  CHECK(t.surely_infinite() == TriState::Yes);
  CHECK(dz.member(t) == TriState::Yes);
  for (uint64_t i = 0; i < 50; ++i) CHECK(e.contains(t.nth(i)));
  for (uint64_t i = 0; i + 1 < 50; ++i) CHECK(t.nth(i) < t.nth(i + 1));

  IdealHandle fin = builtin_ideal("fin");
  CHECK_THROWS_AS(fin.thin_subset(e), CforgeError);
  CHECK_THROWS_AS(dz.thin_subset(RepSet::finite({1})), CforgeError);
}

TEST_CASE("non-p+ witness columns are disjoint and outside the ideal") {
  IdealHandle exf = builtin_ideal("empty-x-fin");
  RepSet a0 = exf.non_pplus_witness(0);
  RepSet a1 = exf.non_pplus_witness(1);
  CHECK(exf.member(a0) == TriState::No);
  CHECK(exf.member(a1) == TriState::No);
  for (uint64_t n = 0; n < 200; ++n) CHECK(!(a0.contains(n) && a1.contains(n)));
  // But every bounded piece of a witness is in the ideal.
  std::set<uint64_t> small;
  for (uint64_t n = 0; n < 100; ++n)
    if (a0.contains(n)) small.insert(n);
  CHECK(!small.empty());
  CHECK(exf.member(RepSet::finite(small)) == TriState::Yes);
}

TEST_CASE("bounds serialize and roundtrip") {
  Bounds b;
  b.index_bound = 1234;
  b.probe_count = 9;
  Bounds c = Bounds::from_json(b.to_json());
  CHECK(c.index_bound == 1234);
  CHECK(c.probe_count == 9);
  CHECK(c.max_level == b.max_level);
}

TEST_CASE("star membership: empty index set in, full index set out") {
  Bounds small;
  small.index_bound = 500;
  small.probe_count = 4;
  small.refinement_count = 6;
  StarIdeal star(builtin_ideal("fin"), small);
  ProbeFamily probes = make_probe_family("fin", 42, small);

  auto [yes, cy] = star_member(star, IndexSet::none(), probes);
  CHECK(yes == TriState::Yes);
  CHECK(cy.kind == Certificate::Kind::Verified);

  auto [no, cn] = star_member(star, IndexSet::all(), probes);
  CHECK(no == TriState::No);
  CHECK(cn.kind == Certificate::Kind::Refuted);
}

TEST_CASE("the tower is trivial at level zero and defined up to four") {
  Bounds small;
  small.index_bound = 500;
  small.probe_count = 3;
  small.refinement_count = 4;
  IdealTower tower(small);
  ProbeFamily probes = make_probe_family("power-set", 42, small);
  auto [t0, c0] = tower.member(0, IndexSet::all(), probes);
  CHECK(t0 == TriState::Yes);
  CHECK(tower.star_at(1).depth() == 1);
  CHECK(tower.star_at(4).depth() == 4);
  auto [t1, c1] = tower.member(1, IndexSet::none(), probes);
  CHECK(t1 == TriState::Yes);
}
