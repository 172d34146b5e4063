#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "cforge/enumeration.hpp"
#include "doctest.h"

using namespace cforge;
using namespace cforge::enumeration;

TEST_CASE("index 0 is the empty set; q is the full level-0 slice") {
  CHECK(unrank(0).empty());
  ClopenX eps0 = ClopenX::canonicalize({Cylinder{0, Word()}});
  CHECK(unrank(q_index()) == eps0);
  CHECK(rank(eps0) == q_index());
  // Stable across repeated queries.
  CHECK(q_index() == q_index());
}

TEST_CASE("rank and unrank are mutually inverse on a prefix") {
  for (uint64_t n = 0; n < 20000; ++n) {
    ClopenX phi = unrank(n);
    CHECK(rank(phi) == n);
  }
}

TEST_CASE("the order is by serialized length, then lexicographic") {
  std::string prev = unrank(1).serialize();
  for (uint64_t n = 2; n < 5000; ++n) {
    std::string cur = unrank(n).serialize();
    bool ordered = prev.size() < cur.size() ||
                   (prev.size() == cur.size() && prev < cur);
    CHECK(ordered);
    prev = std::move(cur);
  }
}

TEST_CASE("no canonical form appears twice") {
  std::set<std::string> seen;
  for (uint64_t n = 0; n < 5000; ++n)
    CHECK(seen.insert(unrank(n).serialize()).second);
}

TEST_CASE("unrank rejects indices beyond the materialized range") {
  CHECK_THROWS_AS(unrank(uint64_t{1} << 62), CforgeError);
}

TEST_CASE("rank rejects forms beyond the materialized range") {
  ClopenX big = ClopenX::canonicalize({Cylinder{0, Word(40, '1')}});
  CHECK_THROWS_AS(rank(big), CforgeError);
}

TEST_CASE("psi agrees with its definition") {
  PointB alpha(RepSet::finite({2, 5}));
  for (uint64_t n = 0; n < 500; ++n)
    for (uint64_t p = 0; p < 3; ++p) {
      bool expected = alpha(n) || contains_point(unrank(n), alpha, p);
      CHECK(psi_eval(n, alpha, p) == expected);
    }
}

TEST_CASE("the materialized range covers the desk scale") {
  unrank(100000);  // forces materialization
  CHECK(materialized_count() > 100000);
}
