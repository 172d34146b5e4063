#include "cforge/clopen.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "cforge/point.hpp"

namespace cforge {
namespace {

// Coverage tree over 2^N: a node is either fully covered (mark) or splits
// into the two child cylinders.  Invariant after reduce(): a marked node has
// no children and no node has two fully-covered children.
struct Trie {
  bool mark = false;
  std::unique_ptr<Trie> child[2];

  bool is_full() const { return mark; }
  bool is_leafless_empty() const { return !mark && !child[0] && !child[1]; }
};

void insert(Trie& node, const Word& w, size_t i) {
  if (node.mark) return;  // absorbed by a shorter word
  if (i == w.size()) {
    node.mark = true;
    node.child[0].reset();
    node.child[1].reset();
    return;
  }
  int b = w[i] - '0';
  if (!node.child[b]) node.child[b] = std::make_unique<Trie>();
  insert(*node.child[b], w, i + 1);
}

// Merge sibling pairs bottom-up.
void reduce(Trie& node) {
  for (int b = 0; b < 2; ++b)
    if (node.child[b]) reduce(*node.child[b]);
  if (node.child[0] && node.child[1] && node.child[0]->mark &&
      node.child[1]->mark) {
    node.mark = true;
    node.child[0].reset();
    node.child[1].reset();
  }
}

void emit(const Trie& node, Word& prefix, uint64_t level,
          std::vector<Cylinder>& out) {
  if (node.mark) {
    out.push_back({level, prefix});
    return;
  }
  for (int b = 0; b < 2; ++b) {
    if (node.child[b]) {
      prefix.push_back(static_cast<char>('0' + b));
      emit(*node.child[b], prefix, level, out);
      prefix.pop_back();
    }
  }
}

std::unique_ptr<Trie> make_full() {
  auto t = std::make_unique<Trie>();
  t->mark = true;
  return t;
}

std::unique_ptr<Trie> clone(const Trie* t) {
  if (!t) return nullptr;
  auto r = std::make_unique<Trie>();
  r->mark = t->mark;
  r->child[0] = clone(t->child[0].get());
  r->child[1] = clone(t->child[1].get());
  return r;
}

std::unique_ptr<Trie> normalize(std::unique_ptr<Trie> n) {
  if (!n) return nullptr;
  if (n->mark) return n;
  if (!n->child[0] && !n->child[1]) return nullptr;
  if (n->child[0] && n->child[1] && n->child[0]->mark && n->child[1]->mark)
    return make_full();
  return n;
}

std::unique_ptr<Trie> complement(const Trie* t);

std::unique_ptr<Trie> xor_tries(const Trie* a, const Trie* b) {
  if (!a) return clone(b);
  if (!b) return clone(a);
  if (a->mark) return complement(b);
  if (b->mark) return complement(a);
  auto n = std::make_unique<Trie>();
  n->child[0] = xor_tries(a->child[0].get(), b->child[0].get());
  n->child[1] = xor_tries(a->child[1].get(), b->child[1].get());
  return normalize(std::move(n));
}

std::unique_ptr<Trie> complement(const Trie* t) {
  if (!t) return make_full();
  if (t->mark) return nullptr;
  auto n = std::make_unique<Trie>();
  n->child[0] = complement(t->child[0].get());
  n->child[1] = complement(t->child[1].get());
  return normalize(std::move(n));
}

std::map<uint64_t, std::unique_ptr<Trie>> build_level_tries(
    const std::vector<Cylinder>& cylinders) {
  std::map<uint64_t, std::unique_ptr<Trie>> tries;
  for (const auto& c : cylinders) {
    auto& t = tries[c.level];
    if (!t) t = std::make_unique<Trie>();
    insert(*t, c.word, 0);
  }
  for (auto& [lvl, t] : tries) reduce(*t);
  return tries;
}

std::vector<Cylinder> emit_all(
    const std::map<uint64_t, std::unique_ptr<Trie>>& tries) {
  std::vector<Cylinder> out;
  for (const auto& [lvl, t] : tries) {
    if (!t || t->is_leafless_empty()) continue;
    Word prefix;
    emit(*t, prefix, lvl, out);
  }
  return out;
}

}  // namespace

bool cylinder_less(const Cylinder& a, const Cylinder& b) {
  if (a.level != b.level) return a.level < b.level;
  if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
  return a.word < b.word;
}

ClopenX ClopenX::canonicalize(const std::vector<Cylinder>& cylinders) {
  ClopenX r;
  r.cyls_ = emit_all(build_level_tries(cylinders));
  std::sort(r.cyls_.begin(), r.cyls_.end(), cylinder_less);
  return r;
}

std::string ClopenX::serialize() const {
  std::string s = "[";
  bool first = true;
  for (const auto& c : cyls_) {
    if (!first) s += ',';
    first = false;
    s += "{\"level\":";
    s += std::to_string(c.level);
    s += ",\"word\":\"";
    s += c.word;
    s += "\"}";
  }
  s += ']';
  return s;
}

Json ClopenX::to_json() const {
  Json arr = Json::array();
  for (const auto& c : cyls_)
    arr.push_back(Json{{"level", c.level}, {"word", c.word}});
  return arr;
}

ClopenX ClopenX::from_json(const Json& j) {
  std::vector<Cylinder> cyls;
  for (const auto& item : j) {
    Cylinder c{item.at("level").get<uint64_t>(),
               item.at("word").get<std::string>()};
    for (char ch : c.word)
      if (ch != '0' && ch != '1') throw CforgeError("bad word bit");
    cyls.push_back(std::move(c));
  }
  return canonicalize(cyls);
}

bool contains_point(const ClopenX& phi, const PointB& alpha, uint64_t p) {
  for (const auto& c : phi.cylinders()) {
    if (c.level != p) continue;
    bool match = true;
    for (size_t i = 0; i < c.word.size(); ++i) {
      if ((alpha(i) ? '1' : '0') != c.word[i]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

bool contains_point_naive(const std::vector<Cylinder>& cylinders,
                          const PointB& alpha, uint64_t p) {
  for (const auto& c : cylinders) {
    if (c.level != p) continue;
    bool match = true;
    for (size_t i = 0; i < c.word.size(); ++i) {
      if ((alpha(i) ? '1' : '0') != c.word[i]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

ClopenX sym_diff(const ClopenX& a, const ClopenX& b) {
  auto ta = build_level_tries(a.cylinders());
  auto tb = build_level_tries(b.cylinders());
  std::map<uint64_t, std::unique_ptr<Trie>> out;
  for (const auto& [lvl, t] : ta) {
    auto it = tb.find(lvl);
    out[lvl] = xor_tries(t.get(), it == tb.end() ? nullptr : it->second.get());
  }
  for (auto& [lvl, t] : tb)
    if (!ta.count(lvl)) out[lvl] = std::move(t);
  return ClopenX::canonicalize(emit_all(out));
}

bool cylinder_subset(const Cylinder& c, const ClopenX& phi) {
  for (const auto& d : phi.cylinders()) {
    if (d.level != c.level) continue;
    if (d.word.size() <= c.word.size() &&
        c.word.compare(0, d.word.size(), d.word) == 0)
      return true;
  }
  return false;
}

ClopenX level_slice(const ClopenX& phi, uint64_t p) {
  std::vector<Cylinder> sel;
  for (const auto& c : phi.cylinders())
    if (c.level == p) sel.push_back({0, c.word});
  return ClopenX::canonicalize(sel);
}

}  // namespace cforge
