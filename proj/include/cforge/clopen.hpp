#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cforge/common.hpp"

namespace cforge {

class PointB;

// A finite binary word over {'0','1'}.  The empty word denotes the full
// cylinder [eps] = 2^N.
using Word = std::string;

struct Cylinder {
  uint64_t level = 0;
  Word word;

  friend bool operator==(const Cylinder&, const Cylinder&) = default;
};

// Canonical order: (level, word length, word lexicographic).
bool cylinder_less(const Cylinder& a, const Cylinder& b);

// A clopen subset of 2^N x N: a finite union of cylinders [s] x {p}, kept in
// canonical form (absorption-free, sibling-merged, sorted).  The empty union
// is the empty set.
class ClopenX {
 public:
  ClopenX() = default;

  // Canonicalizes an arbitrary finite union of cylinders.
  static ClopenX canonicalize(const std::vector<Cylinder>& cylinders);

  const std::vector<Cylinder>& cylinders() const { return cyls_; }
  bool empty() const { return cyls_.empty(); }

  // Serialization fixed for the enumeration order and the wire format:
  // [{"level":n,"word":"0110"},...] in canonical order, no whitespace.
  std::string serialize() const;
  Json to_json() const;
  static ClopenX from_json(const Json& j);

  friend bool operator==(const ClopenX&, const ClopenX&) = default;
  auto operator<=>(const ClopenX& other) const {
    return serialize() <=> other.serialize();
  }

 private:
  std::vector<Cylinder> cyls_;  // canonical
};

// theta(alpha, p) reading of phi as an element of 2^(2^N x N).  Evaluates
// alpha on at most max word length positions.
bool contains_point(const ClopenX& phi, const PointB& alpha, uint64_t p);

// Same test against a raw (possibly non-canonical) cylinder list; the
// semantics-preservation oracle for canonicalize.
bool contains_point_naive(const std::vector<Cylinder>& cylinders,
                          const PointB& alpha, uint64_t p);

// Symmetric difference; X is a group under it.
ClopenX sym_diff(const ClopenX& a, const ClopenX& b);

// [c.word] x {c.level} subseteq phi, decided against the canonical form.
bool cylinder_subset(const Cylinder& c, const ClopenX& phi);

// Cylinders of phi at level p, re-leveled to 0 (the c(I) view).
ClopenX level_slice(const ClopenX& phi, uint64_t p);

}  // namespace cforge
