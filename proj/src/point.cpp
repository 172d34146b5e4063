#include "cforge/point.hpp"

#include <algorithm>

#include "cforge/pairing.hpp"

namespace cforge {
namespace {

bool is_pow2_at_least(uint64_t n, uint64_t lo) {
  return n >= lo && (n & (n - 1)) == 0;
}

// Selected positions of a thinned set: the first `head` positions plus every
// power of two from `head` on; the counting function is O(head + log n), so
// the selection always has density zero in the parent's enumeration.
bool thinned_position(uint64_t pos, uint64_t head) {
  if (pos < head) return true;
  return pos > 0 && is_pow2_at_least(pos, head);
}

}  // namespace

RepSet RepSet::finite(std::set<uint64_t> elems) {
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Finite;
  r.impl_->elems = std::move(elems);
  return r;
}

RepSet RepSet::cofinite(std::set<uint64_t> zeros) {
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Cofinite;
  r.impl_->elems = std::move(zeros);
  return r;
}

RepSet RepSet::periodic(std::string prefix, std::string period) {
  if (period.empty()) throw CforgeError("periodic RepSet needs a period");
  for (char c : prefix)
    if (c != '0' && c != '1') throw CforgeError("bad prefix bit");
  for (char c : period)
    if (c != '0' && c != '1') throw CforgeError("bad period bit");
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Periodic;
  r.impl_->prefix = std::move(prefix);
  r.impl_->period = std::move(period);
  return r;
}

RepSet RepSet::sparse(uint64_t offset, uint64_t stride) {
  if (stride == 0) throw CforgeError("sparse RepSet needs stride > 0");
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Sparse;
  r.impl_->a = offset;
  r.impl_->b = stride;
  return r;
}

RepSet RepSet::fiber(Axis axis, uint64_t index) {
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Fiber;
  r.impl_->axis = axis;
  r.impl_->a = index;
  return r;
}

RepSet RepSet::thinned(RepSet parent, uint64_t head) {
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Thinned;
  r.impl_->parent = std::make_shared<const RepSet>(std::move(parent));
  r.impl_->a = std::max<uint64_t>(head, 1);
  return r;
}

RepSet RepSet::set_union(std::vector<RepSet> parts) {
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Union;
  r.impl_->parts = std::move(parts);
  return r;
}

RepSet RepSet::subset_of(RepSet parent, std::function<bool(uint64_t)> pred,
                         std::string tag) {
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::SubsetOf;
  r.impl_->parent = std::make_shared<const RepSet>(std::move(parent));
  r.impl_->pred = std::move(pred);
  r.impl_->tag = std::move(tag);
  return r;
}

RepSet RepSet::opaque(std::function<bool(uint64_t)> pred, std::string tag) {
  RepSet r;
  r.impl_ = std::make_shared<Impl>();
  r.impl_->kind = Kind::Opaque;
  r.impl_->pred = std::move(pred);
  r.impl_->tag = std::move(tag);
  return r;
}

bool RepSet::contains(uint64_t n) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case Kind::Finite:
      return im.elems.count(n) > 0;
    case Kind::Cofinite:
      return im.elems.count(n) == 0;
    case Kind::Periodic: {
      if (n < im.prefix.size()) return im.prefix[n] == '1';
      return im.period[(n - im.prefix.size()) % im.period.size()] == '1';
    }
    case Kind::Sparse: {
      if (n < im.a + im.b) return false;
      uint64_t d = n - im.a;
      if (d % im.b != 0) return false;
      uint64_t q = d / im.b;
      return (q & (q - 1)) == 0;  // q a positive power of two incl. 1
    }
    case Kind::Fiber: {
      auto [i, j] = unpair(n);
      return im.axis == Axis::First ? i == im.a : j == im.a;
    }
    case Kind::Thinned: {
      if (!im.parent->contains(n)) return false;
      // Position of n in the parent's enumeration.
      uint64_t pos = 0;
      for (uint64_t i = 0;; ++i) {
        uint64_t e = im.parent->nth(i);
        if (e == n) {
          pos = i;
          break;
        }
        if (e > n) return false;
      }
      return thinned_position(pos, im.a);
    }
    case Kind::Union:
      return std::any_of(im.parts.begin(), im.parts.end(),
                         [&](const RepSet& p) { return p.contains(n); });
    case Kind::SubsetOf:
      return im.parent->contains(n) && im.pred(n);
    case Kind::Opaque:
      return im.pred(n);
  }
  return false;
}

uint64_t RepSet::nth(uint64_t i) const {
  const Impl& im = *impl_;
  // Closed forms where we have them; positions in the thinned kinds grow as
  // powers of two, far beyond what a scan could reach.
  if (im.kind == Kind::Sparse) return im.a + im.b * (uint64_t{1} << i);
  if (im.kind == Kind::Fiber)
    return im.axis == Axis::First ? pair(im.a, i) : pair(i, im.a);
  if (im.kind == Kind::Cofinite) {
    uint64_t n = i;
    for (uint64_t z : im.elems) {  // sorted ascending
      if (z <= n) ++n;
      else break;
    }
    return n;
  }
  if (im.kind == Kind::Periodic) {
    uint64_t in_prefix = std::count(im.prefix.begin(), im.prefix.end(), '1');
    if (i < in_prefix) {
      uint64_t seen = 0;
      for (uint64_t p = 0; p < im.prefix.size(); ++p)
        if (im.prefix[p] == '1' && seen++ == i) return p;
    }
    uint64_t per_period = std::count(im.period.begin(), im.period.end(), '1');
    if (per_period == 0) throw CforgeError("RepSet::nth: finite periodic set");
    uint64_t j = i - in_prefix;
    uint64_t base = im.prefix.size() + (j / per_period) * im.period.size();
    uint64_t seen = 0, rem = j % per_period;
    for (uint64_t p = 0; p < im.period.size(); ++p)
      if (im.period[p] == '1' && seen++ == rem) return base + p;
  }
  if (im.kind == Kind::Thinned) {
    // Positions kept: {0, ..., head-1} plus the powers of two >= head.
    if (i < im.a) return im.parent->nth(i);
    uint64_t k = 0;
    while ((uint64_t{1} << k) < im.a) ++k;
    uint64_t shift = k + (i - im.a);
    if (shift >= 63) throw CforgeError("RepSet::nth: thinned position overflow");
    return im.parent->nth(uint64_t{1} << shift);
  }
  std::lock_guard<std::mutex> lock(im.mu);
  while (im.enum_cache.size() <= i) {
    uint64_t n = im.scan_next++;
    if (contains(n)) im.enum_cache.push_back(n);
    if (im.scan_next > (uint64_t{1} << 34))
      throw CforgeError("RepSet::nth: enumeration scan exhausted");
  }
  return im.enum_cache[i];
}

TriState RepSet::surely_infinite() const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case Kind::Finite:
      return TriState::No;
    case Kind::Cofinite:
    case Kind::Sparse:
    case Kind::Fiber:
      return TriState::Yes;
    case Kind::Periodic:
      return im.period.find('1') != std::string::npos ? TriState::Yes
                                                      : TriState::No;
    case Kind::Thinned:
      return im.parent->surely_infinite();
    case Kind::Union: {
      bool all_fin = true;
      for (const auto& p : im.parts) {
        TriState t = p.surely_infinite();
        if (t == TriState::Yes) return TriState::Yes;
        if (t != TriState::No) all_fin = false;
      }
      return all_fin ? TriState::No : TriState::Unknown;
    }
    default:
      return TriState::Unknown;
  }
}

std::optional<uint64_t> RepSet::finite_size() const {
  if (impl_->kind == Kind::Finite) return impl_->elems.size();
  return std::nullopt;
}

RepSet RepSet::normalized() const {
  if (impl_->kind != Kind::Periodic) return *this;
  std::string prefix = impl_->prefix;
  std::string period = impl_->period;
  // Minimal period: smallest divisor whose repetition gives the period.
  for (size_t d = 1; d <= period.size(); ++d) {
    if (period.size() % d != 0) continue;
    bool ok = true;
    for (size_t i = d; i < period.size() && ok; ++i)
      ok = period[i] == period[i % d];
    if (ok) {
      period.resize(d);
      break;
    }
  }
  // Absorb the prefix tail into the period.
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    period.insert(period.begin(), period.back());
    period.pop_back();
  }
  if (period.find('1') == std::string::npos) {
    std::set<uint64_t> ones;
    for (size_t i = 0; i < prefix.size(); ++i)
      if (prefix[i] == '1') ones.insert(i);
    return finite(std::move(ones));
  }
  if (period.find('0') == std::string::npos) {
    std::set<uint64_t> zeros;
    for (size_t i = 0; i < prefix.size(); ++i)
      if (prefix[i] == '0') zeros.insert(i);
    return cofinite(std::move(zeros));
  }
  return periodic(std::move(prefix), std::move(period));
}

bool RepSet::serializable() const {
  switch (impl_->kind) {
    case Kind::Finite:
    case Kind::Cofinite:
    case Kind::Periodic:
    case Kind::Sparse:
    case Kind::Fiber:
      return true;
    case Kind::Thinned:
      return impl_->parent->serializable();
    case Kind::Union:
      return std::all_of(impl_->parts.begin(), impl_->parts.end(),
                         [](const RepSet& p) { return p.serializable(); });
    default:
      return false;
  }
}

Json RepSet::to_json() const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case Kind::Finite:
      return Json{{"kind", "finite"}, {"ones", im.elems}};
    case Kind::Cofinite:
      return Json{{"kind", "cofinite"}, {"zeros", im.elems}};
    case Kind::Periodic:
      return Json{{"kind", "periodic"}, {"prefix", im.prefix}, {"period", im.period}};
    case Kind::Sparse:
      return Json{{"kind", "sparse"}, {"offset", im.a}, {"stride", im.b}};
    case Kind::Fiber:
      return Json{{"kind", "fiber"},
                  {"axis", im.axis == Axis::First ? "first" : "second"},
                  {"index", im.a}};
    case Kind::Thinned:
      return Json{{"kind", "thinned"}, {"head", im.a}, {"parent", im.parent->to_json()}};
    case Kind::Union: {
      Json parts = Json::array();
      for (const auto& p : im.parts) parts.push_back(p.to_json());
      return Json{{"kind", "union"}, {"parts", parts}};
    }
    default:
      throw CforgeError("RepSet not serializable: " + im.tag);
  }
}

RepSet RepSet::from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite") {
    std::set<uint64_t> ones;
    for (const auto& v : j.at("ones")) ones.insert(v.get<uint64_t>());
    return finite(std::move(ones));
  }
  if (kind == "cofinite") {
    std::set<uint64_t> zeros;
    for (const auto& v : j.at("zeros")) zeros.insert(v.get<uint64_t>());
    return cofinite(std::move(zeros));
  }
  if (kind == "periodic")
    return periodic(j.at("prefix").get<std::string>(),
                    j.at("period").get<std::string>());
  if (kind == "sparse")
    return sparse(j.at("offset").get<uint64_t>(), j.at("stride").get<uint64_t>());
  if (kind == "fiber")
    return fiber(j.at("axis").get<std::string>() == "first" ? Axis::First
                                                            : Axis::Second,
                 j.at("index").get<uint64_t>());
  if (kind == "thinned")
    return thinned(from_json(j.at("parent")), j.at("head").get<uint64_t>());
  if (kind == "union") {
    std::vector<RepSet> parts;
    for (const auto& p : j.at("parts")) parts.push_back(from_json(p));
    return set_union(std::move(parts));
  }
  throw CforgeError("unknown RepSet kind: " + kind);
}

PointB::PointB(RepSet ones_view) : ones_(std::move(ones_view)) {
  RepSet view = *ones_;
  eval_ = [view](uint64_t n) { return view.contains(n); };
  token_ = ones_->serializable() ? ones_->to_json().dump() : ("#" + ones_->tag());
}

PointB::PointB(std::function<bool(uint64_t)> eval, std::string token)
    : token_(std::move(token)) {
  // Memoized: opaque evaluators may be costly; answers are immutable.
  auto cache = std::make_shared<std::pair<std::mutex, std::vector<int8_t>>>();
  auto raw = std::move(eval);
  eval_ = [cache, raw](uint64_t n) {
    {
      std::lock_guard<std::mutex> lock(cache->first);
      if (n < cache->second.size() && cache->second[n] >= 0)
        return cache->second[n] != 0;
    }
    bool v = raw(n);
    std::lock_guard<std::mutex> lock(cache->first);
    if (n < (uint64_t{1} << 22)) {
      if (cache->second.size() <= n) cache->second.resize(n + 1, -1);
      cache->second[n] = v ? 1 : 0;
    }
    return v;
  };
}

bool PointB::operator()(uint64_t n) const { return eval_(n); }

Word PointB::prefix(uint64_t len) const {
  Word w;
  w.reserve(len);
  for (uint64_t i = 0; i < len; ++i) w.push_back(eval_(i) ? '1' : '0');
  return w;
}

bool PointB::serializable() const { return ones_ && ones_->serializable(); }

Json PointB::to_json() const {
  if (!serializable()) throw CforgeError("opaque point not serializable");
  return ones_->to_json();
}

PointB PointB::from_json(const Json& j) { return PointB(RepSet::from_json(j)); }

std::optional<uint64_t> first_difference(const PointB& a, const PointB& b,
                                         uint64_t budget) {
  for (uint64_t n = 0; n < budget; ++n)
    if (a(n) != b(n)) return n;
  return std::nullopt;
}

namespace {

// Exact structural comparison for normalized exact kinds; nullopt when the
// pair is not decidable this way.
std::optional<bool> structural_equal(const RepSet& a, const RepSet& b) {
  using K = RepSet::Kind;
  RepSet x = a.normalized();
  RepSet y = b.normalized();
  auto exact = [](const RepSet& r) {
    K k = r.kind();
    return k == K::Finite || k == K::Cofinite || k == K::Periodic;
  };
  if (!exact(x) || !exact(y)) return std::nullopt;
  if (x.kind() != y.kind()) return false;  // normal forms are canonical
  switch (x.kind()) {
    case K::Finite:
    case K::Cofinite:
      return x.elems() == y.elems();
    case K::Periodic:
      return x.prefix() == y.prefix() && x.period() == y.period();
    default:
      return std::nullopt;
  }
}

}  // namespace

TriState point_equal(const PointB& a, const PointB& b, uint64_t budget) {
  if (a.ones_view() && b.ones_view()) {
    if (auto eq = structural_equal(*a.ones_view(), *b.ones_view()))
      return *eq ? TriState::Yes : TriState::No;
  }
  if (!a.token().empty() && a.token() == b.token()) return TriState::Yes;
  if (first_difference(a, b, budget)) return TriState::No;
  return TriState::Unknown;
}

}  // namespace cforge
