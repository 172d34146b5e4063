#include "cforge/enumeration.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace cforge {
namespace enumeration {
namespace {

int digits(uint64_t n) {
  int d = 1;
  while (n >= 10) {
    n /= 10;
    ++d;
  }
  return d;
}

// Canonical word sets over the binary tree: prefix-free, sibling-merged,
// nonempty.  Enumerated by (word count k, total word length W); each set is
// emitted with its words in canonical (length, lex) order.
using WordSet = std::vector<Word>;

class WordSetGen {
 public:
  const std::vector<WordSet>& sets(uint64_t k, uint64_t w) {
    auto key = std::make_pair(k, w);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<WordSet> out;
    if (k == 1 && w == 0) out.push_back({Word()});
    if (k >= 1 && w >= k) {
      // Split into 0-side and 1-side; each word gains one leading bit.
      for (uint64_t k0 = 0; k0 <= k; ++k0) {
        uint64_t k1 = k - k0;
        if (k0 == 0 && k1 == 0) continue;
        for (uint64_t w0 = 0; w0 + k <= w; ++w0) {
          uint64_t w1 = w - k - w0;
          if (k0 == 0 && w0 != 0) continue;
          if (k1 == 0 && w1 != 0) continue;
          const auto& left = k0 == 0 ? empty_ : sets(k0, w0);
          const auto& right = k1 == 0 ? empty_ : sets(k1, w1);
          for (const auto* l : candidates(left, k0))
            for (const auto* r : candidates(right, k1)) {
              // {0,1} at the same level must merge to {eps}: skip it.
              if (l && r && l->size() == 1 && (*l)[0].empty() &&
                  r->size() == 1 && (*r)[0].empty())
                continue;
              WordSet s;
              if (l)
                for (const auto& word : *l) s.push_back("0" + word);
              if (r)
                for (const auto& word : *r) s.push_back("1" + word);
              std::sort(s.begin(), s.end(), [](const Word& a, const Word& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
              out.push_back(std::move(s));
            }
        }
      }
    }
    return memo_[key] = std::move(out);
  }

 private:
  static std::vector<const WordSet*> candidates(const std::vector<WordSet>& v,
                                                uint64_t k) {
    std::vector<const WordSet*> r;
    if (k == 0) {
      r.push_back(nullptr);
      return r;
    }
    for (const auto& s : v) r.push_back(&s);
    return r;
  }

  std::map<std::pair<uint64_t, uint64_t>, std::vector<WordSet>> memo_;
  std::vector<WordSet> empty_;
};

// All canonical forms of exact serialized length L.
// length = 1 + sum over cylinders of (21 + digits(level) + |word|).
void forms_of_length(size_t target, std::vector<ClopenX>& out) {
  WordSetGen gen;
  std::vector<Cylinder> current;

  // Recurse over strictly increasing levels.
  auto rec = [&](auto&& self, uint64_t min_level, uint64_t rem) -> void {
    if (rem == 0) {
      if (!current.empty()) {
        ClopenX phi = ClopenX::canonicalize(current);
        if (phi.serialize().size() == target) out.push_back(std::move(phi));
      }
      return;
    }
    for (uint64_t lvl = min_level;; ++lvl) {
      uint64_t g = static_cast<uint64_t>(digits(lvl));
      // Levels with more digits only cost more.
      if (21 + g > rem) break;
      uint64_t per_word = 21 + g;
      uint64_t max_k = rem / per_word;
      for (uint64_t k = 1; k <= max_k; ++k) {
        uint64_t base = k * per_word;
        if (base > rem) break;
        uint64_t wmax = rem - base;
        for (uint64_t w = 0; w <= wmax; ++w) {
          uint64_t used = base + w;
          uint64_t rest = rem - used;
          if (rest != 0 && rest < 22) continue;  // no room for another level
          for (const auto& ws : gen.sets(k, w)) {
            for (const auto& word : ws) current.push_back({lvl, word});
            self(self, lvl + 1, rest);
            current.resize(current.size() - ws.size());
          }
        }
      }
    }
  };
  if (target >= 1) rec(rec, 0, target - 1);
}

struct Cache {
  std::mutex mu;
  std::vector<ClopenX> forms{ClopenX()};  // forms[0] = empty set
  std::vector<std::string> sers{"[]"};
  size_t next_len = 23;

  void extend_to_len(size_t len) {
    while (next_len <= len && next_len <= kMaxSerLen) {
      std::vector<ClopenX> batch;
      forms_of_length(next_len, batch);
      std::vector<std::pair<std::string, size_t>> order;
      order.reserve(batch.size());
      for (size_t i = 0; i < batch.size(); ++i)
        order.emplace_back(batch[i].serialize(), i);
      std::sort(order.begin(), order.end());
      for (auto& [ser, i] : order) {
        forms.push_back(std::move(batch[i]));
        sers.push_back(std::move(ser));
      }
      ++next_len;
    }
  }

  void extend_to_count(uint64_t n) {
    while (forms.size() <= n) {
      if (next_len > kMaxSerLen)
        throw CforgeError("enumeration index beyond materialized range");
      extend_to_len(next_len);
    }
  }
};

Cache& cache() {
  static Cache c;
  return c;
}

bool ser_less(const std::string& a, const std::string& b) {
  return a.size() != b.size() ? a.size() < b.size() : a < b;
}

}  // namespace

ClopenX unrank(uint64_t n) {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  c.extend_to_count(n);
  return c.forms[n];
}

uint64_t rank(const ClopenX& phi) {
  if (phi.empty()) return 0;
  std::string ser = phi.serialize();
  if (ser.size() > kMaxSerLen)
    throw CforgeError("rank: serialization beyond materialized range");
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  c.extend_to_len(ser.size());
  auto it = std::lower_bound(c.sers.begin(), c.sers.end(), ser, ser_less);
  if (it == c.sers.end() || *it != ser)
    throw CforgeError("rank: form not found (non-canonical input?)");
  return static_cast<uint64_t>(it - c.sers.begin());
}

uint64_t materialized_count() {
  Cache& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  return c.forms.size();
}

bool psi_eval(uint64_t n, const PointB& alpha, uint64_t p) {
  if (alpha(n)) return true;
  return contains_point(unrank(n), alpha, p);
}

uint64_t q_index() {
  static const uint64_t q = rank(ClopenX::canonicalize({{0, Word()}}));
  return q;
}

}  // namespace enumeration
}  // namespace cforge
