#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cforge/clopen.hpp"
#include "cforge/common.hpp"

namespace cforge {

// A representable subset of N.  Membership is total; the structured variants
// (finite, cofinite, periodic, sparse, fiber, thinned, union) admit exact
// reasoning and serialization, the rest only answer point queries.
class RepSet {
 public:
  enum class Kind {
    Finite,         // explicit set
    Cofinite,       // explicit complement
    Periodic,       // prefix bits + repeating period bits
    Sparse,         // {offset + stride * 2^k : k >= 0}
    Fiber,          // {pair(k, j) : j} (first) or {pair(i, k) : i} (second)
    Thinned,        // elements of a parent at positions {j < head} u {2^k >= head}
    Union,          // finite union of parts
    SubsetOf,       // parent restricted by a predicate
    Opaque,         // predicate only
  };
  enum class Axis { First, Second };

  static RepSet finite(std::set<uint64_t> elems);
  static RepSet cofinite(std::set<uint64_t> zeros);
  static RepSet periodic(std::string prefix, std::string period);
  static RepSet sparse(uint64_t offset, uint64_t stride);
  static RepSet fiber(Axis axis, uint64_t index);
  static RepSet thinned(RepSet parent, uint64_t head);
  static RepSet set_union(std::vector<RepSet> parts);
  static RepSet subset_of(RepSet parent, std::function<bool(uint64_t)> pred,
                          std::string tag);
  static RepSet opaque(std::function<bool(uint64_t)> pred, std::string tag);
  static RepSet naturals() { return cofinite({}); }

  Kind kind() const { return impl_->kind; }
  bool contains(uint64_t n) const;

  // The i-th smallest element (memoized scan for the unstructured kinds).
  // Callers must only use this on sets they know to be infinite.
  uint64_t nth(uint64_t i) const;

  // Yes/No when the kind decides it structurally; Unknown otherwise.
  TriState surely_infinite() const;

  // Exact cardinality for Finite, nullopt otherwise.
  std::optional<uint64_t> finite_size() const;

  const std::set<uint64_t>& elems() const { return impl_->elems; }
  const std::string& prefix() const { return impl_->prefix; }
  const std::string& period() const { return impl_->period; }
  uint64_t offset() const { return impl_->a; }
  uint64_t stride() const { return impl_->b; }
  Axis axis() const { return impl_->axis; }
  uint64_t fiber_index() const { return impl_->a; }
  uint64_t head() const { return impl_->a; }
  const RepSet& parent() const { return *impl_->parent; }
  const std::vector<RepSet>& parts() const { return impl_->parts; }
  const std::string& tag() const { return impl_->tag; }

  // Rolls the prefix into the period and minimizes the period; collapses
  // all-zero periods to Finite and all-one periods to Cofinite.  Identity on
  // the other kinds.
  RepSet normalized() const;

  bool serializable() const;
  Json to_json() const;  // throws CforgeError for unserializable kinds
  static RepSet from_json(const Json& j);

 private:
  struct Impl {
    Kind kind;
    std::set<uint64_t> elems;          // Finite / Cofinite
    std::string prefix, period;        // Periodic
    uint64_t a = 0, b = 0;             // Sparse offset/stride, Fiber index, Thinned head
    Axis axis = Axis::First;
    std::shared_ptr<const RepSet> parent;
    std::vector<RepSet> parts;
    std::function<bool(uint64_t)> pred;
    std::string tag;

    mutable std::mutex mu;
    mutable std::vector<uint64_t> enum_cache;
    mutable uint64_t scan_next = 0;
  };

  std::shared_ptr<Impl> impl_;
};

// A point of 2^N: a total 0/1 evaluator with an optional set view of the
// ones.  Memoization never changes answers; values are immutable.
class PointB {
 public:
  PointB() : PointB(RepSet::finite({})) {}
  explicit PointB(RepSet ones_view);
  PointB(std::function<bool(uint64_t)> eval, std::string token);

  bool operator()(uint64_t n) const;
  Word prefix(uint64_t len) const;

  const std::optional<RepSet>& ones_view() const { return ones_; }
  const std::string& token() const { return token_; }

  bool serializable() const;
  Json to_json() const;
  static PointB from_json(const Json& j);

  static PointB char_of(std::set<uint64_t> ones) {
    return PointB(RepSet::finite(std::move(ones)));
  }

 private:
  std::function<bool(uint64_t)> eval_;
  std::optional<RepSet> ones_;
  std::string token_;
};

// Structural equality where decidable; otherwise a prefix scan up to `budget`
// certifies inequality only.  Unknown means "agree through the budget but not
// provably equal".
TriState point_equal(const PointB& a, const PointB& b, uint64_t budget);

// First position where the points differ, scanning at most `budget` bits.
std::optional<uint64_t> first_difference(const PointB& a, const PointB& b,
                                         uint64_t budget);

inline constexpr uint64_t kDefaultEqBudget = 512;

}  // namespace cforge
