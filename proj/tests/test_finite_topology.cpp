#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cforge/finite_space.hpp"
#include "doctest.h"

using namespace cforge;

TEST_CASE("validation rejects malformed open families") {
  CHECK_THROWS_AS(FiniteSpace::create(2, {0}), CforgeError);  // no full set
  CHECK_THROWS_AS(FiniteSpace::create(2, {3}), CforgeError);  // no empty set
  // {a}, {b} without their union.
  CHECK_THROWS_AS(FiniteSpace::create(2, {0, 1, 2}), CforgeError);
  CHECK_THROWS_AS(FiniteSpace::create(13, {0}), CforgeError);
  CHECK_NOTHROW(FiniteSpace::create(2, {0, 1, 3}));
}

TEST_CASE("interior and closure are exact and dual") {
  FiniteSpace s = FiniteSpace::create(2, {0, 1, 3});  // Sierpinski
  CHECK(s.interior(0b01) == 0b01);
  CHECK(s.interior(0b10) == 0);
  CHECK(s.closure(0b10) == 0b10);
  CHECK(s.closure(0b01) == 0b11);
  CHECK(s.is_dense(0b01));
  CHECK(!s.is_dense(0b10));
  CHECK(s.is_nwd(0b10));
  CHECK(!s.is_nwd(0b01));
  for (const auto& x : enumerate_topologies(3))
    for (uint32_t m = 0; m <= x.full(); ++m) {
      CHECK(x.closure(m) == (x.full() & ~x.interior(x.full() & ~m)));
      CHECK((x.interior(m) & ~m) == 0);
      CHECK((m & ~x.closure(m)) == 0);
    }
}

TEST_CASE("discrete and indiscrete extremes") {
  FiniteSpace d = FiniteSpace::discrete(3);
  CHECK(d.opens().size() == 8);
  for (uint32_t m = 0; m <= d.full(); ++m) {
    CHECK(d.interior(m) == m);
    CHECK(d.closure(m) == m);
  }
  FiniteSpace i = FiniteSpace::indiscrete(3);
  CHECK(i.opens().size() == 2);
  CHECK(i.closure(0b001) == i.full());
  // Only the empty set is nowhere dense, so the refinement is the identity.
  CHECK(tau_alpha(i) == i);
  CHECK(tau_alpha(d) == d);
}

TEST_CASE("labeled topology counts match the preorder oracle") {
  const uint64_t expected[4] = {1, 4, 29, 355};
  for (int n = 1; n <= 4; ++n) {
    CHECK(enumerate_topologies(n).size() == expected[n - 1]);
    CHECK(count_preorders(n) == expected[n - 1]);
  }
  CHECK_THROWS_AS(enumerate_topologies(5), CforgeError);
  CHECK_THROWS_AS(count_preorders(0), CforgeError);
}

TEST_CASE("the refinement is a finer topology with the same dense sets") {
  for (int n = 2; n <= 3; ++n)
    for (const auto& x : enumerate_topologies(n)) {
      FiniteSpace xa = tau_alpha(x);
      for (uint32_t v : x.opens()) CHECK(xa.is_open(v));
      for (uint32_t m = 0; m <= x.full(); ++m)
        CHECK(x.is_dense(m) == xa.is_dense(m));
    }
}

TEST_CASE("the refinement identities hold on every small space") {
  for (int n = 1; n <= 3; ++n)
    for (const auto& x : enumerate_topologies(n)) {
      Certificate c = check_tau_alpha_identities(x);
      CHECK(c.kind == Certificate::Kind::Verified);
    }
}

TEST_CASE("the refinement is idempotent on small spaces") {
  for (const auto& x : enumerate_topologies(3)) {
    FiniteSpace xa = tau_alpha(x);
    CHECK(tau_alpha(xa) == xa);
  }
}
