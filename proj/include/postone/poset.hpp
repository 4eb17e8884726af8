// poset.hpp --- finite PO systems (posets with a distinguished reflexive part)
//
// A PO system is a finite set with an antisymmetric transitive relation `<`
// in which reflexive pairs p<p are allowed per element. Elements are interned
// strings with a stable (sorted) order, so every search and every serialized
// report is deterministic. Relations are stored as one bitmask row per
// element; systems are capped at 64 elements.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace postone {

class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

struct Diagnostics {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

// Subsets of a PoSystem's elements as bitmasks.
using Mask = std::uint64_t;
inline constexpr int kMaxElements = 64;

inline constexpr Mask bit(int i) { return Mask{1} << i; }
inline constexpr bool has_bit(Mask m, int i) { return (m >> i) & 1u; }
inline int popcount(Mask m) { return std::popcount(m); }

template <typename Fn>
void for_each_bit(Mask m, Fn&& fn) {
  while (m != 0) {
    int i = std::countr_zero(m);
    fn(i);
    m &= m - 1;
  }
}

inline std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  for_each_bit(m, [&](int i) { out.push_back(i); });
  return out;
}

class PoSystem {
public:
  PoSystem() = default;

  // Builds the system generated by `pairs`: transitive closure of the given
  // relation, reflexive pairs retained as given. Rejects relations whose
  // closure identifies distinct elements.
  static PoSystem generate(std::vector<std::string> elements,
                           const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    if (static_cast<int>(elements.size()) > kMaxElements)
      fail("SizeLimit", "PO system exceeds " + std::to_string(kMaxElements) + " elements");
    PoSystem p;
    p.names_ = std::move(elements);
    p.above_.assign(p.names_.size(), 0);
    for (const auto& [a, b] : pairs) {
      int i = p.index(a), j = p.index(b);
      if (i < 0 || j < 0)
        fail("UnknownElement", "relation pair mentions element not in the set: (" + a + "," + b + ")");
      p.above_[i] |= bit(j);
    }
    p.close_and_check();
    return p;
  }

  // Internal: relation already transitive and antisymmetric.
  static PoSystem from_closed(std::vector<std::string> names, std::vector<Mask> above) {
    PoSystem p;
    p.names_ = std::move(names);
    p.above_ = std::move(above);
    p.close_and_check();
    return p;
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }

  int index(const std::string& n) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), n);
    if (it == names_.end() || *it != n) return -1;
    return static_cast<int>(it - names_.begin());
  }
  int index_or_fail(const std::string& n) const {
    int i = index(n);
    if (i < 0) fail("UnknownElement", "no element named '" + n + "'");
    return i;
  }

  bool lt(int a, int b) const { return has_bit(above_[a], b); }  // a < b
  bool leq(int a, int b) const { return a == b || lt(a, b); }
  bool reflexive(int i) const { return lt(i, i); }

  Mask all() const { return size() == 64 ? ~Mask{0} : (bit(size()) - 1); }
  Mask discrete() const {  // P^d
    Mask m = 0;
    for (int i = 0; i < size(); ++i)
      if (!reflexive(i)) m |= bit(i);
    return m;
  }

  // {q : p<q}; contains p itself iff p is reflexive.
  Mask strict_above(int p) const { return above_[p]; }
  Mask strict_below(int p) const {
    Mask m = 0;
    for (int i = 0; i < size(); ++i)
      if (lt(i, p)) m |= bit(i);
    return m;
  }
  Mask up(int p) const { return above_[p] | bit(p); }    // p↑
  Mask down(int p) const { return strict_below(p) | bit(p); }  // p↓

  Mask up_closure(Mask s) const {
    Mask m = 0;
    for_each_bit(s, [&](int i) { m |= up(i); });
    return m;
  }
  Mask down_closure(Mask s) const {
    Mask m = 0;
    for_each_bit(s, [&](int i) { m |= down(i); });
    return m;
  }
  bool is_upper(Mask s) const { return up_closure(s) == s; }
  bool is_lower(Mask s) const { return down_closure(s) == s; }

  // Minimal/maximal elements of a subset under ≤ (reflexive pairs ignored).
  Mask minimal(Mask s) const {
    Mask m = 0;
    for_each_bit(s, [&](int p) {
      Mask strictly_below = strict_below(p) & ~bit(p) & s;
      if (strictly_below == 0) m |= bit(p);
    });
    return m;
  }
  Mask maximal(Mask s) const {
    Mask m = 0;
    for_each_bit(s, [&](int p) {
      Mask strictly_above = strict_above(p) & ~bit(p) & s;
      if (strictly_above == 0) m |= bit(p);
    });
    return m;
  }

  PoSystem reversed() const {
    std::vector<Mask> rev(size(), 0);
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if (lt(i, j)) rev[j] |= bit(i);
    return from_closed(names_, std::move(rev));
  }

  // Sub-PO-system on a subset, with the local→global index map.
  struct Sub;
  Sub restrict(Mask s) const;

  bool operator==(const PoSystem& o) const { return names_ == o.names_ && above_ == o.above_; }
  bool operator!=(const PoSystem& o) const { return !(*this == o); }

  std::vector<std::pair<std::string, std::string>> relation_pairs() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if (lt(i, j)) out.emplace_back(names_[i], names_[j]);
    return out;
  }

private:
  void close_and_check() {
    int n = size();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        if (has_bit(above_[i], k)) above_[i] |= above_[k];
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (lt(i, j) && lt(j, i))
          fail("AntisymmetryViolation",
               "closure yields " + names_[i] + " < " + names_[j] + " < " + names_[i]);
  }

  std::vector<std::string> names_;
  std::vector<Mask> above_;
};

struct PoSystem::Sub {
  PoSystem sys;
  std::vector<int> global;  // local index -> index in the parent
};

inline PoSystem::Sub PoSystem::restrict(Mask s) const {
  Sub sub;
  sub.global = bits_of(s);
  std::vector<std::string> nm;
  nm.reserve(sub.global.size());
  for (int g : sub.global) nm.push_back(names_[g]);
  std::vector<Mask> ab(sub.global.size(), 0);
  for (size_t i = 0; i < sub.global.size(); ++i)
    for (size_t j = 0; j < sub.global.size(); ++j)
      if (lt(sub.global[i], sub.global[j])) ab[i] |= bit(static_cast<int>(j));
  sub.sys = from_closed(std::move(nm), std::move(ab));
  return sub;
}

// Finite foundation of Q in P: the minimal elements of Q↓. For finite P this
// always exists and satisfies F ⊆ Q↓ and Q↓ ⊆ F↑.
inline Mask finite_foundation(const PoSystem& p, Mask q) {
  Mask dn = p.down_closure(q);
  Mask f = p.minimal(dn);
  if ((dn & ~p.up_closure(f)) != 0)
    fail("InternalAssertion", "minimal elements fail to found the down-closure");
  return f;
}

// --- isomorphism search -----------------------------------------------------
//
// Backtracking search for a bijection preserving < in both directions (and
// hence reflexive flags). `compat` adds per-element constraints (used by the
// extended-system isomorphism). Candidates are tried in index order, so the
// first map found is deterministic.

namespace detail {

struct IsoSignature {
  bool refl;
  int up, down;
  bool operator==(const IsoSignature&) const = default;
};

inline IsoSignature signature(const PoSystem& s, int i) {
  return {s.reflexive(i), popcount(s.up(i)), popcount(s.down(i))};
}

// Visits isomorphisms a→b until `fn` returns false. Returns true if the
// enumeration was cut short by fn.
inline bool enumerate_isos(const PoSystem& a, const PoSystem& b,
                           const std::function<bool(int, int)>& compat,
                           const std::function<bool(const std::vector<int>&)>& fn) {
  int n = a.size();
  if (n != b.size()) return false;
  std::vector<detail::IsoSignature> siga(n), sigb(n);
  for (int i = 0; i < n; ++i) siga[i] = signature(a, i), sigb[i] = signature(b, i);
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return !fn(map);
    for (int c = 0; c < n; ++c) {
      if (used[c] || !(siga[i] == sigb[c])) continue;
      if (compat && !compat(i, c)) continue;
      bool ok = a.lt(i, i) == b.lt(c, c);
      for (int j = 0; j < i && ok; ++j)
        ok = a.lt(i, j) == b.lt(c, map[j]) && a.lt(j, i) == b.lt(map[j], c);
      if (!ok) continue;
      map[i] = c;
      used[c] = true;
      if (rec(i + 1)) return true;
      map[i] = -1;
      used[c] = false;
    }
    return false;
  };
  return rec(0);
}

}  // namespace detail

inline std::optional<std::vector<int>> find_iso(
    const PoSystem& a, const PoSystem& b,
    const std::function<bool(int, int)>& compat = nullptr) {
  std::optional<std::vector<int>> found;
  detail::enumerate_isos(a, b, compat, [&](const std::vector<int>& m) {
    found = m;
    return false;  // stop
  });
  return found;
}

inline bool isomorphic(const PoSystem& a, const PoSystem& b) { return find_iso(a, b).has_value(); }

// True iff the only isomorphism P→P is the identity.
inline bool has_only_trivial_automorphism(const PoSystem& p) {
  bool nontrivial = false;
  detail::enumerate_isos(p, p, nullptr, [&](const std::vector<int>& m) {
    for (int i = 0; i < static_cast<int>(m.size()); ++i)
      if (m[i] != i) {
        nontrivial = true;
        return false;
      }
    return true;
  });
  return !nontrivial;
}

// --- ideals ------------------------------------------------------------------

struct Ideal {
  Mask carrier = 0;
  int principal = -1;  // generator index, or -1 for non-principal
  bool is_principal() const { return principal >= 0; }
};

// All ideals of a finite PO system: exactly the principal ideals p↓.
inline std::vector<Ideal> ideals_finite(const PoSystem& p) {
  std::vector<Ideal> out;
  out.reserve(p.size());
  for (int i = 0; i < p.size(); ++i) out.push_back({p.down(i), i});
  return out;
}

// The ideal completion id(P) of a finite PO system: ideals ordered by
// inclusion, J<J exactly for the principal ideals of reflexive elements.
// Order-isomorphic to P itself (all ideals are principal), but computed from
// the carriers.
inline PoSystem ideal_poset(const PoSystem& p) {
  auto ids = ideals_finite(p);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& j : ids)
    for (const auto& k : ids) {
      bool strict_incl = (j.carrier & ~k.carrier) == 0 && j.carrier != k.carrier;
      bool diag = (&j == &k) && p.reflexive(j.principal);
      if (strict_incl || diag) pairs.emplace_back(p.name(j.principal), p.name(k.principal));
    }
  return PoSystem::generate(p.names(), pairs);
}

}  // namespace postone
